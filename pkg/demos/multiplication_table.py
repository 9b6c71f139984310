# Multiplication tables of R in small characteristic.
# f_m * f_n is read off from the Jordan type of x + y on k[x,y]/(x^m, y^n).

import numpy as np

from convring import ProductTable, basis, char_zero_product, product_multiplicities, ring_mul
from convring.ring import format_element, RingElement

N = 8

# characteristic 0: the Clebsch-Gordan pattern, one block per step of 2
for m in range(1, 5):
    print(f"p=0  f{m}*f6 =", format_element(RingElement(char_zero_product(m, 6).as_dict())))

# the same products once p is small
for p in (2, 3):
    print()
    for m in range(1, 5):
        lam = product_multiplicities(m, 6, p)
        print(f"p={p}  f{m}*f6 =", format_element(RingElement(lam.as_dict())))

# largest block size as a heat map of the table, p = 2
largest = np.zeros((N, N), dtype=int)
for m in range(1, N + 1):
    for n in range(1, N + 1):
        largest[m - 1, n - 1] = product_multiplicities(m, n, 2).max_index()
print()
print("largest block of f_m * f_n at p=2 (rows m, cols n):")
print(largest)

# powers of 2 absorb: f_m f_8 = m f_8 for m <= 8
t = ProductTable(2)
print()
print([format_element(ring_mul(basis(m), basis(8), t)) for m in range(1, 9)])

# and R is not a domain
x = basis(2) - 2 * basis(1)
print("(f2 - 2 f1) * f2 =", format_element(ring_mul(x, basis(2), t)))
