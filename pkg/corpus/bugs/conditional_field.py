class Account:
    def __init__(self, owner):
        self.owner = owner
        self.limit = None


class Limit:
    def __init__(self, amount):
        self.amount = amount


def open_account(kind):
    acct = Account("ann")
    if kind == 1:
        acct.limit = Limit(100)
    return acct


def main(kind):
    acct = open_account(kind)
    return acct.limit.amount
