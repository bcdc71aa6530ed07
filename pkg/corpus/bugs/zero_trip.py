class Item:
    def __init__(self, n):
        self.n = n


class Holder:
    def __init__(self):
        self.last = None


def fill(h, count):
    i = 0
    while i < count:
        h.last = Item(i)
        i = i + 1
    return h


def main(count):
    h = fill(Holder(), count)
    return h.last.n
