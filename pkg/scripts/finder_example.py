"""Find all A_0 + mu A_1 for Z = x + y mu + x y mu^2 + mu^3 on two coordinates."""

from starmul import matrix as mx
from starmul.dsl import format_matrix, format_system
from starmul.finder import find_A
from starmul.muring import MonicZ
from starmul.ratfunc import Chart
from starmul.system import admits_multiplication


def main():
    ch = Chart(("x", "y"))
    x, y = ch.symbols()
    z = MonicZ((x, y, x * y))
    fam = find_A(z, 2, 1, ch.coords)
    print(f"Z = {z.as_mupoly()}")
    print(f"family dimension {fam.dimension}")
    for i, t in enumerate(fam.basis):
        print(f"  basis {i}: A0 = {format_matrix(t.mats[0])}, A1 = {format_matrix(t.mats[1])}")
    sys = fam.specialize([x, y + 2])
    a0, a1 = sys.a.mats
    d = ((x * y, x * x), (y * y - 1, x * y))
    print(f"A0 = D A1 with D = {format_matrix(d)}: {a0 == mx.matmul(d, a1)}")
    print(f"admits multiplication: {admits_multiplication(sys)}")
    print(format_system(sys), end="")


if __name__ == "__main__":
    main()
