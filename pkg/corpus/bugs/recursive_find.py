class Tree:
    def __init__(self, key, left, right):
        self.key = key
        self.left = left
        self.right = right


def find(t, key):
    if t is None:
        return None
    if t.key == key:
        return t
    if key < t.key:
        return find(t.left, key)
    return find(t.right, key)


def main(key):
    root = Tree(5, Tree(2, None, None), Tree(8, None, None))
    hit = find(root, key)
    return hit.key
