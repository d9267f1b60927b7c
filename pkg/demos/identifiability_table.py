"""How many uniformly spread targets an N-element array can serve.

Prints the largest identifiable K for the complete and path graphs under
both readings of identifiability.

    python demos/identifiability_table.py
"""

from ambigraph import identifiability


def main(n_values=range(2, 7)):
    print(f"{'N':>3} {'family':>9} {'K* feasible':>12} {'K* gain>0':>10}")
    for n in n_values:
        for family, k_max in (("complete", n + 1), ("path", 2 * n)):
            rep = identifiability(n, family, k_max)
            print(f"{n:>3} {family:>9} {rep.k_star_feasible:>12} {rep.k_star_positive:>10}")


if __name__ == "__main__":
    main()
