class Door:
    def __init__(self):
        self.key = None


class Key:
    def __init__(self, code):
        self.code = code


class House:
    def __init__(self, door):
        self.front = door
        self.back = door


def main(lock, unlock):
    h = House(Door())
    if lock:
        h.front.key = Key(7)
    if unlock:
        h.back.key = None
    return h.front.key.code
