"""Cohomology tables of the Kodaira-Thurston model: de Rham, F_0 and the cone.

Prints dimensions and representatives per degree, then the images of the
F_0 representatives under g.
"""
from fpcone.equivalence import map_g
from fpcone.homology import cohomology, cone_complex, derham_complex, filtered_complex
from fpcone.models import builtin_models


def show(title, report):
    print(f"== {title} ==")
    for k in sorted(report.dims):
        reps = "; ".join(str(x) for x in report.elements.get(k, []))
        print(f"  H^{k}  dim {report.dims[k]}  {reps}")


def main(p=0):
    m = builtin_models()["kt4"]
    show("de Rham", cohomology(derham_complex(m)))
    fil = cohomology(filtered_complex(m, p))
    show(f"F_{p}", fil)
    show(f"cone, p = {p}", cohomology(cone_complex(m, p)))
    print("== g on F_%d representatives ==" % p)
    for k in sorted(fil.elements):
        for x in fil.elements[k]:
            print(f"  {x}  ->  {map_g(x)}")


if __name__ == "__main__":
    import sys
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 0)
