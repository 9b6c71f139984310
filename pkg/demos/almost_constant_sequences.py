# R_inf tensor Q as almost constant rational sequences.  R_nu sits inside
# R_(nu+1) by repeating the last coordinate, so an element is a finite
# prefix plus an eventual value.

from convring import SubringElement, almost_constant_embedding, localization_check, subring_mul
from convring.subring import orthogonal_idempotents_check, rational_idempotents

p = 3
x = SubringElement(p, (2, 0, 1))
y = SubringElement(p, (0, 1, 0, -1))
nu = 3
x, y = x.extended(nu), y.extended(nu)


def show(seq, k=7):
    return " ".join(str(v) for v in seq.head(k)) + " ..."


ex, ey = almost_constant_embedding(x), almost_constant_embedding(y)
print("x ->", show(ex))
print("y ->", show(ey))
print("xy ->", show(almost_constant_embedding(subring_mul(x, y))))
print("pointwise ->", show(ex * ey))

# e_i = f_(p^i) / p^i become indicator sequences of [i, inf)
for i, e in enumerate(rational_idempotents(p, 4)):
    print(f"e_{i} ->", show(almost_constant_embedding(e)))

# differences e_j - e_(j+1) are orthogonal, one per point: as nu grows there
# are more and more of them
print([orthogonal_idempotents_check(p, k) for k in range(1, 7)])

# f_m / 1 = m / 1 after inverting the f_(p^i)
print(all(localization_check(m, p) for m in range(1, 28)))
