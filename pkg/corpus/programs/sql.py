CREATE = 0
SELECT = 1


class Create:
    def run(self):
        return "create"


class Select:
    def run(self):
        return "select"

    def add_where(self):
        return "where"


def run_sql(mode):
    if mode == CREATE:
        sql = Create()
    else:
        sql = Select()
    if mode == SELECT:
        sql.add_where()
    return sql.run()
