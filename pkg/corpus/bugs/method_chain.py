class Queue:
    def __init__(self):
        self.head = None

    def push(self, v):
        self.head = Elem(v, self.head)
        return self

    def peek(self):
        return self.head


class Elem:
    def __init__(self, v, nxt):
        self.v = v
        self.nxt = nxt


def main(n):
    q = Queue()
    i = 0
    while i < n:
        q.push(i)
        i = i + 1
    return q.peek().v
