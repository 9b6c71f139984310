# The table does not depend on the formal group law.
# Compare x + y, x + y + xy and a made-up law against the unipotent picture
# (J_m + E) (x) (J_n + E) - E.

import time

from convring import GroupLaw, additive_law, multiplicative_law, product_multiplicities
from convring import unipotent_tensor_multiplicities

p = 3
odd_law = {(1, 0): 1, (0, 1): 1, (1, 1): 2, (2, 3): 1, (4, 1): 1}

mismatches = 0
start = time.perf_counter()
for m in range(1, 13):
    for n in range(1, 13):
        add = product_multiplicities(m, n, p, additive_law(p, m, n))
        mul = product_multiplicities(m, n, p, multiplicative_law(p, m, n))
        odd = product_multiplicities(m, n, p, GroupLaw(p, None, None, odd_law, "odd"))
        uni = unipotent_tensor_multiplicities(m, n, p)
        if not add == mul == odd == uni:
            mismatches += 1
            print("mismatch at", m, n, add, mul, odd, uni)
print(f"{12 * 12} cells, {mismatches} mismatches, {time.perf_counter() - start:.2f}s")

# one cell written out
print("f5*f7 at p=3:", product_multiplicities(5, 7, 3))
