class Perm:
    def __init__(self, a, b, c, d):
        self.a = a
        self.b = b
        self.c = c
        self.d = d

    def first(self):
        return self.a

    def flip(self, k):
        # reverse the first k slots in place
        if k == 2:
            t = self.a
            self.a = self.b
            self.b = t
        if k == 3:
            t = self.a
            self.a = self.c
            self.c = t
        if k == 4:
            t = self.a
            self.a = self.d
            self.d = t
            t = self.b
            self.b = self.c
            self.c = t
        return self

    def rotate(self):
        t = self.a
        self.a = self.b
        self.b = self.c
        self.c = self.d
        self.d = t
        return self


def count_flips(p):
    flips = 0
    k = p.first()
    while k != 1:
        p.flip(k)
        flips = flips + 1
        k = p.first()
    return flips


def fannkuch(rounds):
    p = Perm(3, 1, 4, 2)
    best = 0
    while rounds > 0:
        q = Perm(p.a, p.b, p.c, p.d)
        n = count_flips(q)
        if best < n:
            best = n
        p.rotate()
        rounds = rounds - 1
    return best
