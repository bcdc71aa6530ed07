class Entry:
    def show(self):
        return 1


class Slot:
    def __init__(self):
        self.val = None


def main(key):
    slot = Slot()
    if key == 1:
        slot.val = Entry()
    if key == 1:
        v = slot.val
        return v.show()
    return 0
