class Slot:
    def __init__(self, n):
        self.n = n


def main(n):
    s = None
    if n > 1:
        s = Slot(n)
    if n > 0:
        return s.n
    return 0
