class Seq:
    def __init__(self, start):
        self.a = start
        self.b = start + 1
        self.c = start + 2
        self.d = start + 3
        self.e = start + 4
        self.f = start + 5
        self.g = start + 6
        self.h = start + 7
        self.i = start + 8
        self.j = start + 9

    def shift(self, k):
        self.a = self.a + k
        self.b = self.b + k
        self.c = self.c + k
        self.d = self.d + k
        self.e = self.e + k
        self.f = self.f + k
        self.g = self.g + k
        self.h = self.h + k
        self.i = self.i + k
        self.j = self.j + k
        return self


class Pair:
    def __init__(self, left, right):
        self.left = left
        self.right = right

    def swap(self):
        return Pair(self.right, self.left)


def unpack_ten(s):
    a = s.a
    b = s.b
    c = s.c
    d = s.d
    e = s.e
    f = s.f
    g = s.g
    h = s.h
    i = s.i
    j = s.j
    return a + b + c + d + e + f + g + h + i + j


def unpack_pair(p):
    left = p.left
    right = p.right
    return left * 100 + right


def do_unpacking(loops, s):
    total = 0
    n = 0
    while n < loops:
        total = total + unpack_ten(s)
        total = total + unpack_ten(s)
        total = total + unpack_ten(s)
        total = total + unpack_ten(s)
        total = total + unpack_ten(s)
        s.shift(1)
        n = n + 1
    return total


def do_pairs(loops):
    p = Pair(1, 2)
    total = 0
    n = 0
    while n < loops:
        total = total + unpack_pair(p)
        p = p.swap()
        total = total + unpack_pair(p)
        p = p.swap()
        n = n + 1
    return total


def bench_tuple(loops):
    s = Seq(0)
    return do_unpacking(loops, s)


def bench_list(loops):
    s = Seq(10)
    s.shift(2)
    return do_unpacking(loops, s)


def main(loops):
    x = bench_tuple(loops)
    y = bench_list(loops)
    z = do_pairs(loops)
    return x + y + z
