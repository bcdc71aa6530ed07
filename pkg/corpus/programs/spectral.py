class Vec:
    def __init__(self, x, y, z):
        self.x = x
        self.y = y
        self.z = z

    def dot(self, other):
        return self.x * other.x + self.y * other.y + self.z * other.z

    def scale(self, k):
        return Vec(self.x * k, self.y * k, self.z * k)

    def add(self, other):
        return Vec(self.x + other.x, self.y + other.y, self.z + other.z)


def entry(i, j):
    s = i + j
    return s * (s + 1) // 2 + i + 1


class Matrix:
    def __init__(self):
        self.r0 = Vec(entry(0, 0), entry(0, 1), entry(0, 2))
        self.r1 = Vec(entry(1, 0), entry(1, 1), entry(1, 2))
        self.r2 = Vec(entry(2, 0), entry(2, 1), entry(2, 2))

    def times(self, v):
        return Vec(self.r0.dot(v), self.r1.dot(v), self.r2.dot(v))

    def transpose_times(self, v):
        a = self.r0.scale(v.x)
        b = self.r1.scale(v.y)
        c = self.r2.scale(v.z)
        return a.add(b).add(c)


def normalize(v):
    n = v.dot(v)
    if n == 0:
        return v
    return Vec(v.x * 1000 // n, v.y * 1000 // n, v.z * 1000 // n)


def power(m, v, steps):
    u = v
    while steps > 0:
        u = m.transpose_times(m.times(u))
        u = normalize(u)
        steps = steps - 1
    return u


def spectral(steps):
    m = Matrix()
    v = Vec(1, 1, 1)
    u = power(m, v, steps)
    w = m.times(u)
    return u.dot(w)
