class Job:
    def __init__(self, name):
        self.name = name
        self.result = None

    def run(self, x):
        self.result = Result(x * 2)
        return self


class Result:
    def __init__(self, v):
        self.v = v


def main(skip):
    job = Job("j")
    if skip == 0:
        job.run(3)
    return job.result.v
