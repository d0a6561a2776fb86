"""Double-double arithmetic for cancellation-heavy series summation.

A value is a pair ``(hi, lo)`` of floats whose unevaluated sum represents
the number, with ``|lo| <= ulp(hi)/2``.  Only the handful of operations the
ascending Bessel series needs are implemented; everything assumes finite
inputs.  Algorithms are the classic error-free transformations of Dekker
and Knuth as organised in Bailey's QD library.
"""

_SPLIT = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def fast_two_sum(a, b):
    # requires |a| >= |b|
    s = a + b
    return s, b - (s - a)


def two_prod(a, b):
    p = a * b
    t = _SPLIT * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLIT * b
    bh = t - (t - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def add(x, y):
    s, e = two_sum(x[0], y[0])
    e += x[1] + y[1]
    return fast_two_sum(s, e)


def add_d(x, b):
    s, e = two_sum(x[0], b)
    e += x[1]
    return fast_two_sum(s, e)


def sub(x, y):
    return add(x, (-y[0], -y[1]))


def mul(x, y):
    p, e = two_prod(x[0], y[0])
    e += x[0] * y[1] + x[1] * y[0]
    return fast_two_sum(p, e)


def mul_d(x, b):
    p, e = two_prod(x[0], b)
    e += x[1] * b
    return fast_two_sum(p, e)


def div(x, y):
    q1 = x[0] / y[0]
    r = sub(x, mul_d(y, q1))
    q2 = r[0] / y[0]
    r = sub(r, mul_d(y, q2))
    q3 = r[0] / y[0]
    s, e = fast_two_sum(q1, q2)
    return fast_two_sum(s, e + q3)


def to_float(x):
    return x[0] + x[1]
