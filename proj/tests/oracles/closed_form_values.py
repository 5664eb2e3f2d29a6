"""High-precision reference values for the closed-form unit tests.

Evaluated with mpmath at 50 digits; the printed numbers are frozen into
tests/test_thresholds.cpp and tests/test_dynamics.cpp.
"""
from mpmath import mp, mpf, sqrt, log, e

mp.dps = 50


def F(rho, beta, k):
    return beta * rho - 2 * k * log(rho)


def g(rho, gamma, k):
    s = gamma - 2 * k * rho
    sign = (s > 0) - (s < 0)
    return sign * sqrt(gamma - 2 * k * rho + 2 * k * rho * log(2 * k * rho / gamma))


def g1(rho, gamma, k, c):
    root = sqrt(rho**2 - 2 * c * gamma / k)
    return sqrt(gamma - 2 * k * (c + root + rho * log((rho - root) / (2 * c))))


def g2(rho, k, c):
    return sqrt(-2 * c * k + k / (2 * c) * rho**2 + 2 * k * rho * log(2 * c / rho))


def G(rho, rs, beta, k, c):
    return beta * (rho - rs) - 2 * k * log(rho / rs) - 2 * c * k / rho + 2 * c * k / rs


def crit(beta, k, c):
    r = sqrt(k**2 - 2 * c * k * beta)
    return (k - r) / beta, (k + r) / beta


one = mpf(1)
print("F(2;1,1)           ", F(mpf(2), one, one))
print("F(e;0,1)           ", F(e, mpf(0), one))
print("g(1,4,1)           ", g(one, mpf(4), one))
print("g(2,1,1)           ", g(mpf(2), one, one))
print("g(1,1,1)           ", g(one, one, one))
print("g1(4,1,1,1)        ", g1(mpf(4), one, one, one))
print("g1(4,4,1,1)        ", g1(mpf(4), mpf(4), one, one))
print("g2(3,1,1)          ", g2(mpf(3), one, one))
print("g2(1,1,1)^2        ", -2 + mpf(1) / 2 + 2 * log(2))
r1, r2 = crit(mpf("0.25"), one, one)
print("rho1*,rho2* b=.25  ", r1, r2)
print("G(4,r2,.25,1,1)    ", G(mpf(4), r2, mpf("0.25"), one, one))
print("4*G(4,..)          ", 4 * G(mpf(4), r2, mpf("0.25"), one, one))
print("saddle eig b=.25   ", sqrt(r2 * sqrt(1 - 2 * mpf("0.25"))))
print("2 ln 2             ", 2 * log(2))
print("sep(b=1,k=1,rho=1) ", -sqrt(F(one, one, one) - F(mpf(2), one, one)))
# beta < 0, c > 0 rest point
rb = crit(mpf(-1), one, one)[0]
print("rho* b=-1 c=1      ", rb)
