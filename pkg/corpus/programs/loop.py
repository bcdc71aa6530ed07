class Node:
    def __init__(self, v):
        self.v = v
        self.next = None

    def value(self):
        return self.v


def build(n):
    head = None
    i = 0
    while i < n:
        node = Node(i)
        node.next = head
        head = node
        i = i + 1
    return head


def last_value(n):
    cur = None
    i = 0
    while i < n:
        cur = Node(i * 2)
        i = i + 1
    if i == 0:
        return -1
    return cur.value()


def main(n):
    head = build(n)
    total = 0
    if head is not None:
        total = head.value()
    return total + last_value(n)
