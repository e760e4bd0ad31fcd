"""Leakage bound for a transmon with a finite-transparency barrier.

Formula-level demo: the asymptotic bandgaps and the perturbation-norm
bound combine into a single closed-form leakage bound without building
any matrix.  Sweeps the barrier transparency at fixed E_J / E_C.
"""

from leakage import transmon_bandgap, transmon_leakage_bound
from leakage.models import transmon_perturbation_norm


def main():
    ej_over_ec = 90.0
    print(f"transmon at E_J / E_C = {ej_over_ec}")
    for k in range(3):
        print(f"  bandgap k = {k}: {transmon_bandgap(k, ej_over_ec):.4f} E_C")
    print("transparency sweep (k = 1 gap):")
    for d in [1e-4, 3e-4, 1e-3, 3e-3, 1e-2]:
        v_norm = transmon_perturbation_norm(ej_over_ec, d)
        bound = transmon_leakage_bound(ej_over_ec, d)
        print(f"  D = {d:.0e}: ||V|| <= {v_norm:.5f} E_C, leakage bound {bound:.5f}")


if __name__ == "__main__":
    main()
