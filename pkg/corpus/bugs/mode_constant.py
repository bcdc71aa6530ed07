READ = 0
WRITE = 1


class Buffer:
    def __init__(self):
        self.data = None

    def load(self):
        self.data = Data("abc")
        return self


class Data:
    def __init__(self, text):
        self.text = text


def main(mode):
    buf = Buffer()
    if mode == READ:
        buf.load()
    return buf.data.text
