"""Independent values for series used by the modular tests."""
import mpmath as mp

mp.mp.dps = 30

# p_n = 1 + log(n+1), tail constant 1/8: sum (1/8)^(p_n) = (1/8) (zeta(ln 8) - 1)
print("custom log tail c=1/8 :", mp.nstr(mp.mpf(1) / 8 * (mp.zeta(mp.log(8)) - 1), 17))
# p_n = n, run 1..1000 of 0.9
print("0.9 run 1..1000       :", mp.nstr(mp.nsum(lambda n: mp.mpf("0.9") ** n, [1, 1000]), 17))
# delta2 witness partial sums for p_n = n, n_k = k^2 + 1
print("sum 1/(k^2+1), k<=50  :", mp.nstr(sum(mp.mpf(1) / (k * k + 1) for k in range(1, 51)), 17))
print("sum 1/k^2, k<=50      :", mp.nstr(sum(mp.mpf(1) / k**2 for k in range(1, 51)), 17))
# ||(1/2)1 - prefix_40|| under p_n = n: 1/(2r) with r^41 = 1 - r
r = mp.findroot(lambda r: r**41 - (1 - r), 0.93)
print("norm of tail after 40 :", mp.nstr(1 / (2 * r), 17))
