"""Curvature-scalar frames: which point pairs stay localised after aligning R-tilde.

Prints the localisation table and the observable values per branch.
"""

from qrframes.reports import RunReport, emit_report
from qrframes.spacetime import build_comparison, curvature_example, localisation_scan, observable_scan


def main():
    sup, p, q = curvature_example()
    c_r, c_rt = build_comparison(sup[0], sup[1], "R"), build_comparison(sup[0], sup[1], "Rt")
    print(f"C_R  = {c_r.image}")
    print(f"C_Rt = {c_rt.image}")
    print(f"p={p}, q={q}: Riem2 reads {sup[0].observable('Riem2')[p]} and {sup[1].observable('Riem2')[q]}\n")
    rep = RunReport("localisation_scan")
    rep.tables["localisation"] = localisation_scan(sup, "R", "Rt")
    rep.tables["riem2"] = observable_scan(sup, "Riem2", "R")
    print(emit_report(rep, "csv", table="localisation"))
    print(emit_report(rep, "csv", table="riem2"))


if __name__ == "__main__":
    main()
