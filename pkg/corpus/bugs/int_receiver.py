class Box:
    def __init__(self, size):
        self.size = size


def choose(k):
    if k < 2:
        return Box(k)
    return k


def main(k):
    b = choose(k)
    return b.size
