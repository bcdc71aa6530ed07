class User:
    def __init__(self, name):
        self.name = name


def lookup(uid):
    if uid == 1:
        return User("root")
    if uid == 2:
        return User("guest")
    return None


def greet(uid):
    u = lookup(uid)
    return "hi " + u.name


def main(uid):
    return greet(uid)
