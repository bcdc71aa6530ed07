class Cell:
    def __init__(self, value, nxt):
        self.value = value
        self.next = nxt


def build(n):
    head = None
    i = 0
    while i < n:
        head = Cell(i, head)
        i = i + 1
    return head


def second(head):
    return head.next.value


def main(n):
    return second(build(n))
