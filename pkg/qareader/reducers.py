"""
Associative accumulators for per-example results (retain counts, EM/F1
averages). Each reducer is an (update, total) pair of closures wrapped in a
Reducer object.
"""


def counter():
    counter_value = 0

    def func(value):
        nonlocal counter_value
        counter_value += value

    return func, lambda: counter_value


def mean():
    total_value = 0.0
    count = 0

    def func(value):
        nonlocal total_value, count
        total_value += value
        count += 1

    def total():
        return total_value / count if count else 0.0

    return func, total


reducers = {
    "counter": counter,
    "mean": mean,
}


def new_reducer(name):
    reducerf = reducers.get(name, None)

    if not reducerf:
        raise KeyError(f"Unknown reducer [{name}]")

    update, total = reducerf()

    return Reducer(update, total)


class Reducer:
    def __init__(self, update, total):
        self.updatef = update
        self.totalf = total

    def add(self, value):
        self.updatef(value)

    def total(self):
        return self.totalf()
