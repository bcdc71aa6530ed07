WOOD = 1
STONE = 2
IRON = 3


class Stack:
    def __init__(self, kind, count):
        self.kind = kind
        self.count = count

    def take(self, n):
        if n < self.count:
            self.count = self.count - n
            return n
        got = self.count
        self.count = 0
        return got

    def empty(self):
        return self.count == 0


class Inventory:
    def __init__(self):
        self.wood = Stack(WOOD, 0)
        self.stone = Stack(STONE, 0)
        self.iron = Stack(IRON, 0)

    def slot(self, kind):
        if kind == WOOD:
            return self.wood
        if kind == STONE:
            return self.stone
        return self.iron

    def add(self, kind, n):
        s = self.slot(kind)
        s.count = s.count + n
        return s.count

    def has(self, kind, n):
        s = self.slot(kind)
        return not (s.count < n)


class Tool:
    def __init__(self, name, power):
        self.name = name
        self.power = power
        self.uses = 0

    def use(self):
        self.uses = self.uses + 1
        return self.power


class Recipe:
    def __init__(self, name, kind, cost, power):
        self.name = name
        self.kind = kind
        self.cost = cost
        self.power = power

    def craft(self, inv):
        if not inv.has(self.kind, self.cost):
            return None
        s = inv.slot(self.kind)
        s.take(self.cost)
        return Tool(self.name, self.power)


class Worker:
    def __init__(self, inv):
        self.inv = inv
        self.tool = None
        self.mined = 0

    def equip(self, recipe):
        t = recipe.craft(self.inv)
        if t is not None:
            self.tool = t
        return t

    def gather(self, kind):
        power = 1
        if self.tool is not None:
            power = self.tool.use()
        self.inv.add(kind, power)
        self.mined = self.mined + power
        return power

    def best_tool_name(self):
        if self.tool is None:
            return "hands"
        return self.tool.name


def simulate(days, target):
    inv = Inventory()
    w = Worker(inv)
    axe = Recipe("axe", WOOD, 3, 2)
    pick = Recipe("pick", STONE, 4, 3)
    day = 0
    while day < days:
        w.gather(WOOD)
        if inv.has(WOOD, 3):
            w.equip(axe)
        if day > 1:
            w.gather(STONE)
        if inv.has(STONE, 4):
            w.equip(pick)
        day = day + 1
    name = w.best_tool_name()
    if target == 1:
        return name.upper()
    return w.mined


def report(days):
    inv = Inventory()
    inv.add(IRON, days)
    s = inv.slot(IRON)
    left = s.take(2)
    if s.empty():
        return left
    return left + s.count


def main(days, target):
    a = simulate(days, target)
    b = report(days)
    return str(a) + str(b)
