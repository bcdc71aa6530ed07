class Conn:
    def __init__(self):
        self.open = True

    def close(self):
        self.open = False
        return self


def main(a, b):
    c = Conn()
    if a:
        c = None
    if b:
        c.close()
    return 0
