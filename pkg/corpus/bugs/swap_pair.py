class Pair:
    def __init__(self, left, right):
        self.left = left
        self.right = right

    def swap(self):
        t = self.left
        self.left = self.right
        self.right = t
        return self


class Val:
    def __init__(self, x):
        self.x = x


def main(times):
    p = Pair(Val(1), None)
    i = 0
    while i < times:
        p.swap()
        i = i + 1
    return p.left.x
