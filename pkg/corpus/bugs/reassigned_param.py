class Tag:
    def __init__(self, s):
        self.s = s


def relabel(tag, k):
    if k == 2:
        tag = None
    return tag


def main(k):
    t = relabel(Tag("x"), k)
    return t.s
