class Item:
    def use(self):
        return 1


def main():
    n = len("abc")
    item = None
    i = 0
    while i < n:
        item = Item()
        i = i + 1
    return item.use()
