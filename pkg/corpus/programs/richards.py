I_IDLE = 1
I_WORK = 2
I_HANDLERA = 3
I_HANDLERB = 4
I_DEVA = 5
I_DEVB = 6

K_DEV = 1000
K_WORK = 1001

BUFSIZE = 4


class Packet:
    def __init__(self, link, ident, kind):
        self.link = link
        self.ident = ident
        self.kind = kind
        self.datum = 0
        self.b0 = 0
        self.b1 = 0
        self.b2 = 0
        self.b3 = 0

    def append_to(self, lst):
        self.link = None
        if lst is None:
            return self
        p = lst
        nxt = p.link
        while nxt is not None:
            p = nxt
            nxt = p.link
        p.link = self
        return lst

    def put(self, i, v):
        if i == 0:
            self.b0 = v
        elif i == 1:
            self.b1 = v
        elif i == 2:
            self.b2 = v
        else:
            self.b3 = v
        return v

    def get(self, i):
        if i == 0:
            return self.b0
        if i == 1:
            return self.b1
        if i == 2:
            return self.b2
        return self.b3


class TaskRec:
    def __init__(self):
        self.kind = 0


class DeviceTaskRec:
    def __init__(self):
        self.pending = None
        self.kind = 1


class IdleTaskRec:
    def __init__(self):
        self.control = 1
        self.count = 10000
        self.kind = 2


class HandlerTaskRec:
    def __init__(self):
        self.work_in = None
        self.device_in = None
        self.kind = 3

    def work_in_add(self, p):
        self.work_in = p.append_to(self.work_in)
        return self.work_in

    def device_in_add(self, p):
        self.device_in = p.append_to(self.device_in)
        return self.device_in


class WorkerTaskRec:
    def __init__(self):
        self.destination = I_HANDLERA
        self.count = 0
        self.kind = 4


class TaskState:
    def __init__(self):
        self.packet_pending = True
        self.task_waiting = False
        self.task_holding = False

    def packet_pending_state(self):
        self.packet_pending = True
        self.task_waiting = False
        self.task_holding = False
        return self

    def waiting(self):
        self.packet_pending = False
        self.task_waiting = True
        self.task_holding = False
        return self

    def running(self):
        self.packet_pending = False
        self.task_waiting = False
        self.task_holding = False
        return self

    def waiting_with_packet(self):
        self.packet_pending = True
        self.task_waiting = True
        self.task_holding = False
        return self

    def is_held_or_waiting(self):
        return self.task_holding or (not self.packet_pending and self.task_waiting)

    def is_waiting_with_packet(self):
        return self.packet_pending and self.task_waiting and not self.task_holding


class Task:
    def __init__(self, sched, ident, prio, wkq, body, rec):
        self.sched = sched
        self.link = sched.task_list
        self.ident = ident
        self.prio = prio
        self.input = wkq
        self.body = body
        self.rec = rec
        self.state = TaskState()
        if wkq is None:
            self.state.waiting()
        else:
            self.state.waiting_with_packet()
        sched.task_list = self
        sched.register(self)

    def add_packet(self, p, old):
        if self.input is None:
            self.input = p
            self.state.packet_pending = True
            if old.prio < self.prio:
                return self
        else:
            self.input = p.append_to(self.input)
        return old

    def run_task(self):
        msg = None
        if self.state.is_waiting_with_packet():
            msg = self.input
            self.input = msg.link
            if self.input is None:
                self.state.running()
            else:
                self.state.packet_pending_state()
        return self.body.run(self, msg)

    def wait_task(self):
        self.state.task_waiting = True
        return self

    def hold(self):
        self.sched.hold_count = self.sched.hold_count + 1
        self.state.task_holding = True
        return self.link

    def release(self, ident):
        t = self.sched.find(ident)
        if t is None:
            return None
        t.state.task_holding = False
        if self.prio < t.prio:
            return t
        return self

    def qpkt(self, pkt):
        t = self.sched.find(pkt.ident)
        if t is None:
            return None
        self.sched.qpkt_count = self.sched.qpkt_count + 1
        pkt.link = None
        pkt.ident = self.ident
        return t.add_packet(pkt, self)


class DeviceBody:
    def run(self, task, pkt):
        d = task.rec
        if pkt is None:
            pkt = d.pending
            if pkt is None:
                return task.wait_task()
            d.pending = None
            return task.qpkt(pkt)
        d.pending = pkt
        if task.sched.tracing:
            task.sched.trace(pkt.datum)
        return task.hold()


class HandlerBody:
    def run(self, task, pkt):
        h = task.rec
        if pkt is not None:
            if pkt.kind == K_WORK:
                h.work_in_add(pkt)
            else:
                h.device_in_add(pkt)
        work = h.work_in
        if work is None:
            return task.wait_task()
        count = work.datum
        if BUFSIZE < count + 1:
            h.work_in = work.link
            return task.qpkt(work)
        dev = h.device_in
        if dev is None:
            return task.wait_task()
        h.device_in = dev.link
        dev.datum = work.get(count)
        work.datum = count + 1
        return task.qpkt(dev)


class IdleBody:
    def run(self, task, pkt):
        i = task.rec
        i.count = i.count - 1
        if i.count == 0:
            return task.hold()
        if i.control // 2 * 2 == i.control:
            i.control = i.control // 2
            return task.release(I_DEVA)
        i.control = i.control // 2 + 7
        return task.release(I_DEVB)


class WorkBody:
    def run(self, task, pkt):
        w = task.rec
        if pkt is None:
            return task.wait_task()
        if w.destination == I_HANDLERA:
            dest = I_HANDLERB
        else:
            dest = I_HANDLERA
        w.destination = dest
        pkt.ident = dest
        pkt.datum = 0
        i = 0
        while i < BUFSIZE:
            w.count = w.count + 1
            if 26 < w.count:
                w.count = 1
            pkt.put(i, w.count + 64)
            i = i + 1
        return task.qpkt(pkt)


class Scheduler:
    def __init__(self, tracing):
        self.task_list = None
        self.current = None
        self.current_id = 0
        self.hold_count = 0
        self.qpkt_count = 0
        self.tracing = tracing
        self.layout = 0
        self.t1 = None
        self.t2 = None
        self.t3 = None
        self.t4 = None
        self.t5 = None
        self.t6 = None

    def register(self, task):
        ident = task.ident
        if ident == I_IDLE:
            self.t1 = task
        elif ident == I_WORK:
            self.t2 = task
        elif ident == I_HANDLERA:
            self.t3 = task
        elif ident == I_HANDLERB:
            self.t4 = task
        elif ident == I_DEVA:
            self.t5 = task
        else:
            self.t6 = task
        return task

    def find(self, ident):
        if ident == I_IDLE:
            return self.t1
        if ident == I_WORK:
            return self.t2
        if ident == I_HANDLERA:
            return self.t3
        if ident == I_HANDLERB:
            return self.t4
        if ident == I_DEVA:
            return self.t5
        if ident == I_DEVB:
            return self.t6
        return None

    def trace(self, a):
        self.layout = self.layout - 1
        if self.layout < 1:
            self.layout = 50
        return a

    def schedule(self, limit):
        self.current = self.task_list
        steps = 0
        while self.current is not None:
            if limit < steps:
                return steps
            steps = steps + 1
            t = self.current
            if t.state.is_held_or_waiting():
                self.current = t.link
            else:
                self.current_id = t.ident
                if self.tracing:
                    self.trace(t.ident)
                self.current = t.run_task()
        return steps


def make_packets(count, ident, kind):
    wkq = None
    i = 0
    while i < count:
        wkq = Packet(wkq, ident, kind)
        i = i + 1
    return wkq


def setup(sched, packets):
    Task(sched, I_IDLE, 0, None, IdleBody(), IdleTaskRec())
    wkq = make_packets(packets, 0, K_WORK)
    Task(sched, I_WORK, 1000, wkq, WorkBody(), WorkerTaskRec())
    wkq = make_packets(packets + 1, I_DEVA, K_DEV)
    Task(sched, I_HANDLERA, 2000, wkq, HandlerBody(), HandlerTaskRec())
    wkq = make_packets(packets + 1, I_DEVB, K_DEV)
    Task(sched, I_HANDLERB, 3000, wkq, HandlerBody(), HandlerTaskRec())
    Task(sched, I_DEVA, 4000, None, DeviceBody(), DeviceTaskRec())
    Task(sched, I_DEVB, 5000, None, DeviceBody(), DeviceTaskRec())
    return sched


def checksum(sched):
    total = sched.hold_count * 7 + sched.qpkt_count
    t = sched.task_list
    while t is not None:
        total = total + t.prio // 1000
        t = t.link
    return total


def first_waiting(sched):
    t = sched.task_list
    found = None
    while t is not None:
        if found is None:
            if t.state.task_waiting:
                found = t
        t = t.link
    return found


def describe(sched, verbose):
    w = first_waiting(sched)
    label = "none"
    if w is not None:
        label = str(w.ident)
    if verbose == 1:
        idle = sched.find(I_IDLE)
        if idle is not None:
            label = label + ":" + str(idle.rec.count)
    return label


def busiest(sched, rounds):
    best = None
    t = sched.task_list
    while t is not None:
        if best is None:
            best = t
        elif best.prio < t.prio:
            best = t
        t = t.link
    if 0 < rounds:
        return best.ident
    return 0


def device_summary(sched, rounds):
    a = sched.find(I_DEVA)
    b = sched.find(I_DEVB)
    pending = 0
    if a.rec.pending is not None:
        pending = pending + 1
    if b.rec.pending is not None:
        pending = pending + 1
    last = None
    if 0 < rounds:
        last = Packet(None, I_DEVA, K_DEV)
    if 1 < rounds + 1:
        pending = pending + last.kind
    return pending


def prio_of(t):
    return t.prio


def link_prio(t):
    nxt = t.link
    if nxt is None:
        return 0
    return prio_of(nxt)


def present(t):
    return t is not None


def report(sched):
    total = 0
    a = sched.current
    if present(a):
        total = total + prio_of(a)
    b = first_waiting(sched)
    if present(b):
        total = total + link_prio(b)
    if present(a):
        total = total + prio_of(a) + link_prio(a)
    return total


def spare_packet(rounds):
    spare = None
    if rounds >= 1:
        spare = Packet(None, I_WORK, K_WORK)
    if rounds > 0:
        return spare.kind
    return 0


def main(rounds, verbose):
    sched = Scheduler(verbose == 2)
    setup(sched, 2)
    steps = sched.schedule(rounds * 40)
    out = checksum(sched) + steps
    label = describe(sched, verbose)
    top = busiest(sched, rounds)
    dev = device_summary(sched, rounds)
    extra = report(sched) + spare_packet(rounds)
    return str(out) + label + str(top + dev + extra)
