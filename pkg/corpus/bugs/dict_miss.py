class Entry:
    def __init__(self, value):
        self.value = value


class Table:
    def __init__(self):
        self.a = Entry(1)
        self.b = Entry(2)

    def get(self, key):
        if key == "a":
            return self.a
        if key == "b":
            return self.b
        return None


def main(k):
    t = Table()
    key = "a"
    if k == 1:
        key = "b"
    if k == 2:
        key = "c"
    return t.get(key).value
