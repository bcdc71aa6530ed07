class Circle:
    def __init__(self, r):
        self.r = r

    def area(self):
        return 3 * self.r * self.r


class Label:
    def __init__(self, text):
        self.text = text


def make(kind):
    if kind == 0:
        return Circle(2)
    return Label("x")


def main(kind):
    shape = make(kind)
    return shape.area()
