class Report:
    def __init__(self, title):
        self.title = title

    def annotate(self, note):
        self.note = note
        return self


def main(k):
    r = Report("t")
    if k > 1:
        r.annotate("n")
    return r.note
