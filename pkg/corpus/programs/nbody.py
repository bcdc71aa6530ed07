SOLAR_MASS = 40


class Body:
    def __init__(self, x, y, vx, vy, mass):
        self.x = x
        self.y = y
        self.vx = vx
        self.vy = vy
        self.mass = mass
        self.next = None

    def kinetic(self):
        return self.mass * (self.vx * self.vx + self.vy * self.vy) // 2

    def move(self, dt):
        self.x = self.x + dt * self.vx
        self.y = self.y + dt * self.vy
        return self

    def pull(self, other, dt):
        dx = self.x - other.x
        dy = self.y - other.y
        d2 = dx * dx + dy * dy + 1
        self.vx = self.vx - dx * other.mass * dt // d2
        self.vy = self.vy - dy * other.mass * dt // d2
        other.vx = other.vx + dx * self.mass * dt // d2
        other.vy = other.vy + dy * self.mass * dt // d2
        return d2


class System:
    def __init__(self):
        self.first = None
        self.size = 0

    def add(self, body):
        body.next = self.first
        self.first = body
        self.size = self.size + 1
        return body

    def advance(self, dt):
        a = self.first
        while a is not None:
            b = a.next
            while b is not None:
                a.pull(b, dt)
                b = b.next
            a = a.next
        a = self.first
        while a is not None:
            a.move(dt)
            a = a.next
        return self

    def energy(self):
        e = 0
        a = self.first
        while a is not None:
            e = e + a.kinetic()
            b = a.next
            while b is not None:
                dx = a.x - b.x
                dy = a.y - b.y
                e = e - a.mass * b.mass // (dx * dx + dy * dy + 1)
                b = b.next
            a = a.next
        return e

    def momentum(self):
        px = 0
        py = 0
        a = self.first
        while a is not None:
            px = px + a.vx * a.mass
            py = py + a.vy * a.mass
            a = a.next
        return Body(0, 0, px, py, 1)

    def offset(self):
        m = self.momentum()
        sun = self.find_heaviest()
        if sun is None:
            return 0
        sun.vx = 0 - m.vx // SOLAR_MASS
        sun.vy = 0 - m.vy // SOLAR_MASS
        return sun.mass

    def find_heaviest(self):
        best = None
        a = self.first
        while a is not None:
            if best is None:
                best = a
            elif best.mass < a.mass:
                best = a
            a = a.next
        return best


def make_system(planets):
    s = System()
    s.add(Body(0, 0, 0, 0, SOLAR_MASS))
    if planets > 0:
        s.add(Body(5, 0, 0, 2, 1))
    if planets > 1:
        s.add(Body(-7, 1, 1, -1, 2))
    if planets > 2:
        s.add(Body(3, 9, -1, 0, 1))
    return s


def simulate(planets, steps):
    s = make_system(planets)
    s.offset()
    before = s.energy()
    while steps > 0:
        s.advance(1)
        steps = steps - 1
    after = s.energy()
    return before - after


def heaviest_name(planets):
    s = make_system(planets)
    h = s.find_heaviest()
    if h.mass == SOLAR_MASS:
        return "sun"
    return "planet"


def main(planets, steps):
    d = simulate(planets, steps)
    n = heaviest_name(planets)
    return str(d) + n
