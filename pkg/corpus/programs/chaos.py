class GVector:
    def __init__(self, x, y, z):
        self.x = x
        self.y = y
        self.z = z

    def add(self, other):
        return GVector(self.x + other.x, self.y + other.y, self.z + other.z)

    def sub(self, other):
        return GVector(self.x - other.x, self.y - other.y, self.z - other.z)

    def mul(self, k):
        return GVector(self.x * k, self.y * k, self.z * k)

    def linear(self, other, l1, l2):
        return GVector(self.x * l1 + other.x * l2, self.y * l1 + other.y * l2, self.z * l1 + other.z * l2)

    def mag2(self):
        return self.x * self.x + self.y * self.y + self.z * self.z


class Spline:
    def __init__(self, p0, p1, p2, degree):
        self.p0 = p0
        self.p1 = p1
        self.p2 = p2
        self.degree = degree

    def at(self, u):
        a = self.p0.linear(self.p1, 4 - u, u)
        b = self.p1.linear(self.p2, 4 - u, u)
        return a.linear(b, 4 - u, u)

    def length(self):
        return self.p0.sub(self.p2).mag2()


def blend(v, w, weight, use_w):
    # w is only meaningful when use_w is set
    if use_w:
        return v.linear(w, 4 - weight, weight)
    return v.mul(4)


def shift(v, delta, has_delta):
    if has_delta:
        return v.add(delta)
    return v


class Chaosgame:
    def __init__(self, splines, thickness):
        self.splines = splines
        self.thickness = thickness
        self.minx = 0
        self.maxx = 0
        self.count = 0

    def transform(self, point, which):
        s = self.splines
        if which == 0:
            base = s.at(1)
        else:
            base = s.at(3)
        moved = blend(point, base, 2, True)
        scaled = blend(moved, None, 0, False)
        return shift(scaled, None, False)

    def truncate(self, point):
        if point.x < self.minx:
            self.minx = point.x
        if self.maxx < point.x:
            self.maxx = point.x
        return point

    def step(self, point, which):
        p = self.transform(point, which)
        p = shift(p, GVector(1, 1, 0), True)
        self.count = self.count + 1
        return self.truncate(p)

    def run(self, n):
        point = GVector(1, 2, 0)
        i = 0
        while i < n:
            point = self.step(point, i - (i // 2) * 2)
            i = i + 1
        return self.maxx - self.minx


def make_spline(flat):
    a = GVector(0, 0, 0)
    b = GVector(2, 3, 0)
    if flat:
        c = GVector(4, 0, 0)
    else:
        c = GVector(4, 4, 4)
    return Spline(a, b, c, 3)


def main(n, flat):
    sp = make_spline(flat)
    game = Chaosgame(sp, 1)
    width = game.run(n)
    extra = blend(GVector(1, 1, 1), sp.p1, 1, True)
    return width + extra.mag2() + sp.length()
