class Unsatisfiable(Exception):
    """No scoring function over the dataset satisfies the fairness oracle."""
