class Box:
    def get(self):
        return 1


def main(flag):
    if flag:
        obj = Box()
    else:
        obj = None
    if flag:
        return obj.get()
    return 0
