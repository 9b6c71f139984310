# R_nu: the span of f_1, f_p, ..., f_(p^nu), closed under the product
# f_(p^i) f_(p^j) = p^min(i,j) f_(p^max(i,j)).

from convring import (
    SubringElement,
    conductor_generator,
    image_membership,
    phi_map,
    phi_matrix,
    phi_preimage,
    smith_normal_form,
    subring_mul,
)
from convring.subring import NotInImage

p, nu = 2, 3
print("Phi matrix:")
for row in phi_matrix(p, nu):
    print("  ", row)
print("Smith form:", smith_normal_form(phi_matrix(p, nu)))

x = SubringElement(p, (1, -2, 0, 3))
y = SubringElement(p, (0, 1, 1, 0))
print("x =", x.coeffs, "-> Phi(x) =", phi_map(x))
print("y =", y.coeffs, "-> Phi(y) =", phi_map(y))

# Phi is a ring map into Z^(nu+1) with pointwise product
xy = subring_mul(x, y)
print("Phi(xy) =", phi_map(xy))
print("pointwise =", tuple(a * b for a, b in zip(phi_map(x), phi_map(y))))

# tuples outside the image
for t in [(1, 3, 7, 15), (1, 2, 3, 4)]:
    print(t, "in image:", image_membership(t, p, nu))
    try:
        print("   preimage", phi_preimage(t, p, nu).coeffs)
    except NotInImage as exc:
        print("   ", exc)

c = conductor_generator(p, nu)
print("conductor generator:", c)
# c times any integer tuple lands in the image
print(all(image_membership(tuple(ci * a for ci, a in zip(c, t)), p, nu)
          for t in [(1, 0, 0, 0), (0, 0, 0, 1), (5, -3, 2, 7)]))
