class Node:
    def __init__(self, value):
        self.value = value
        self.peer = None


def main(flag):
    a = Node(1)
    a.peer = Node(2)
    b = a
    if flag:
        b.peer = None
    return a.peer.value
