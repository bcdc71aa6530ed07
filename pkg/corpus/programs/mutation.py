class Counter:
    def __init__(self):
        self.n = 0

    def bump(self):
        self.n = self.n + 1
        return self.n


def main(k):
    c = Counter()
    c.bump()
    return c.bump() + k
