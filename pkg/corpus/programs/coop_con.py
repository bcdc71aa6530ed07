IDLE = 0
RUNNING = 1
DONE = 2


class Task:
    def __init__(self, name, work):
        self.name = name
        self.work = work
        self.state = IDLE
        self.next = None

    def step(self):
        if self.work > 0:
            self.work = self.work - 1
            self.state = RUNNING
        else:
            self.state = DONE
        return self.state

    def finished(self):
        return self.state == DONE


class Scheduler:
    def __init__(self):
        self.head = None
        self.count = 0

    def add(self, task):
        task.next = self.head
        self.head = task
        self.count = self.count + 1
        return task

    def run_once(self):
        t = self.head
        busy = 0
        while t is not None:
            if not t.finished():
                t.step()
                busy = busy + 1
            t = t.next
        return busy

    def run(self, limit):
        rounds = 0
        while rounds < limit:
            if self.run_once() == 0:
                return rounds
            rounds = rounds + 1
        return rounds


def main(a, b):
    s = Scheduler()
    s.add(Task("reader", a))
    s.add(Task("writer", b))
    s.add(Task("logger", 1))
    return s.run(6)
