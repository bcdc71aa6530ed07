class Meter:
    def __init__(self, v):
        self.v = v


def reading(k):
    if k == 0:
        return 0.5
    return Meter(k)


def main(k):
    m = reading(k)
    return m.v
