class Leaf:
    def __init__(self, v):
        self.v = v


def level3(k):
    if k == 3:
        return None
    return Leaf(k)


def level2(k):
    return level3(k)


def level1(k):
    return level2(k)


def level0(k):
    leaf = level1(k)
    return leaf.v


def main(k):
    return level0(k)
