class Point:
    def __init__(self, i):
        self.x = i * 3
        self.y = i + 1

    def normalize(self):
        norm = self.x * self.x + self.y * self.y + 1
        self.x = self.x // norm
        self.y = self.y // norm
        return self

    def maximize(self, other):
        if self.x < other.x:
            self.x = other.x
        if self.y < other.y:
            self.y = other.y
        return self


class PointList:
    def __init__(self):
        self.item = None


def maximize(points):
    p = points.item
    if p is None:
        return None
    return p.maximize(Point(0))


def benchmark(n):
    points = PointList()
    i = 0
    while i < n:
        points.item = Point(i)
        i = i + 1
    j = 0
    while j < n:
        p = points.item
        p.normalize()
        j = j + 1
    best = maximize(points)
    if best is None:
        return -1
    return best.x + best.y
