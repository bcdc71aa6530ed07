def label(code):
    if code == 0:
        return "zero"
    if code == 1:
        return "one"
    return code


def main(code):
    s = label(code)
    return s.upper()
