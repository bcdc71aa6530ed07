class Config:
    def __init__(self, depth):
        self.depth = depth


def depth_of(cfg):
    return cfg.depth + 1


def safe(n):
    return depth_of(Config(n))


def risky(n):
    cfg = None
    if n > 2:
        cfg = Config(n)
    return depth_of(cfg)


def main(n):
    return safe(n) + risky(n)
