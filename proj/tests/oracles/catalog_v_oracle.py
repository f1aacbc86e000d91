"""Independent high-precision values for the reciprocal-exponent catalog function.

v = sum_n n^(1/n) * 1_{(1/(n+1), 1/n)} on (0,1), p(x) = 1/x.
rho(c * v restricted to cells n > k) = sum_{n>k} int_{1/(n+1)}^{1/n} (c n^(1/n))^(1/x) dx
"""
import mpmath as mp

mp.mp.dps = 30


def cell(c, n):
    theta = mp.mpf(c) * mp.power(n, mp.mpf(1) / n)
    return mp.quad(lambda x: mp.power(theta, 1 / x), [mp.mpf(1) / (n + 1), mp.mpf(1) / n])


def rho(c, k=0, terms=400):
    return sum(cell(c, n) for n in range(k + 1, k + terms + 1))


if __name__ == "__main__":
    print("rho(0.5 v)  =", mp.nstr(rho(0.5), 17))
    print("rho(0.75 v) =", mp.nstr(rho(0.75), 17))
    print("rho(0.25 v) =", mp.nstr(rho(0.25), 17))
    for k in (5, 10, 20):
        print(f"rho(0.5 (v - v_{k})) =", mp.nstr(rho(0.5, k), 17), " bound", mp.nstr(mp.mpf(0.5) ** (k + 1) / 0.5, 17))
    print("sum_{k<=50} 1/(k^2+1) =", mp.nstr(sum(mp.mpf(1) / (k * k + 1) for k in range(1, 51)), 17))
    print("rho_(0,1/2)(0.9) =", mp.nstr(mp.quad(lambda x: mp.power(mp.mpf('0.9'), 1 / x), [0, 0.25, 0.5]), 17))
