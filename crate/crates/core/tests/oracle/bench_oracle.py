"""Straight-from-formula evaluation of the base benchmark functions.

    python3 bench_oracle.py > bench_golden.json
"""
import json
import math

PI = math.pi


def sphere(x):
    return sum(v * v for v in x)


def elliptic(x):
    d = len(x)
    return sum((1e6 ** (i / (d - 1) if d > 1 else 0.0)) * v * v for i, v in enumerate(x))


def bent_cigar(x):
    return x[0] ** 2 + 1e6 * sum(v * v for v in x[1:])


def discus(x):
    return 1e6 * x[0] ** 2 + sum(v * v for v in x[1:])


def different_powers(x):
    d = len(x)
    return math.sqrt(sum(abs(v) ** (2 + 4 * i / (d - 1) if d > 1 else 2) for i, v in enumerate(x)))


def rosenbrock(x):
    return sum(100 * (x[i] ** 2 - x[i + 1]) ** 2 + (x[i] - 1) ** 2 for i in range(len(x) - 1))


def schaffers_f7(x):
    d = len(x)
    total = 0.0
    for i in range(d - 1):
        y = math.sqrt(x[i] ** 2 + x[i + 1] ** 2)
        total += math.sqrt(y) + math.sqrt(y) * math.sin(50 * y ** 0.2) ** 2
    return (total / (d - 1)) ** 2


def ackley(x):
    d = len(x)
    a = -20 * math.exp(-0.2 * math.sqrt(sum(v * v for v in x) / d))
    b = -math.exp(sum(math.cos(2 * PI * v) for v in x) / d)
    return a + b + 20 + math.e


def weierstrass(x):
    a, b, kmax = 0.5, 3.0, 20
    d = len(x)
    s0 = sum(a ** k * math.cos(PI * b ** k) for k in range(kmax + 1))
    total = 0.0
    for v in x:
        total += sum(a ** k * math.cos(2 * PI * b ** k * (v + 0.5)) for k in range(kmax + 1))
    return total - d * s0


def griewank(x):
    s = sum(v * v for v in x) / 4000
    p = 1.0
    for i, v in enumerate(x):
        p *= math.cos(v / math.sqrt(i + 1))
    return s - p + 1


def rastrigin(x):
    return sum(v * v - 10 * math.cos(2 * PI * v) + 10 for v in x)


def noncontinuous_rastrigin(x):
    y = [v if abs(v) <= 0.5 else math.floor(2 * v + 0.5) / 2 for v in x]
    return rastrigin(y)


def schwefel(x):
    d = len(x)
    f = 0.0
    for v in x:
        z = v + 4.209687462275036e2
        if z > 500:
            m = 500 - math.fmod(z, 500)
            f -= m * math.sin(math.sqrt(m))
            f += ((z - 500) / 100) ** 2 / d
        elif z < -500:
            m = 500 - math.fmod(abs(z), 500)
            f -= (-500 + math.fmod(abs(z), 500)) * math.sin(math.sqrt(m))
            f += ((z + 500) / 100) ** 2 / d
        else:
            f -= z * math.sin(math.sqrt(abs(z)))
    return f + 4.189828872724338e2 * d


def katsuura(x):
    d = len(x)
    f = 1.0
    for i, v in enumerate(x):
        t = 0.0
        for j in range(1, 33):
            s = 2.0 ** j * v
            t += abs(s - math.floor(s + 0.5)) / 2.0 ** j
        f *= (1 + (i + 1) * t) ** (10 / d ** 1.2)
    return 10 / d ** 2 * f - 10 / d ** 2


def lunacek(x):
    d = len(x)
    mu0 = 2.5
    s = 1 - 1 / (2 * math.sqrt(d + 20) - 8.2)
    mu1 = -math.sqrt((mu0 ** 2 - 1) / s)
    t1 = sum(v * v for v in x)
    t2 = sum((v + mu0 - mu1) ** 2 for v in x)
    return min(t1, d + s * t2) + 10 * (d - sum(math.cos(2 * PI * v) for v in x))


def expanded_griewank_rosenbrock(x):
    d = len(x)
    total = 0.0
    for i in range(d):
        a, b = x[i], x[(i + 1) % d]
        t = 100 * (a * a - b) ** 2 + (a - 1) ** 2
        total += t * t / 4000 - math.cos(t) + 1
    return total


def expanded_schaffers_f6(x):
    d = len(x)
    total = 0.0
    for i in range(d):
        a, b = x[i], x[(i + 1) % d]
        r2 = a * a + b * b
        total += 0.5 + (math.sin(math.sqrt(r2)) ** 2 - 0.5) / (1 + 0.001 * r2) ** 2
    return total


BASES = {
    "sphere": sphere,
    "elliptic": elliptic,
    "bent_cigar": bent_cigar,
    "discus": discus,
    "different_powers": different_powers,
    "rosenbrock": rosenbrock,
    "schaffers_f7": schaffers_f7,
    "ackley": ackley,
    "weierstrass": weierstrass,
    "griewank": griewank,
    "rastrigin": rastrigin,
    "noncontinuous_rastrigin": noncontinuous_rastrigin,
    "schwefel": schwefel,
    "katsuura": katsuura,
    "lunacek_bi_rastrigin": lunacek,
    "expanded_griewank_rosenbrock": expanded_griewank_rosenbrock,
    "expanded_schaffers_f6": expanded_schaffers_f6,
}

POINTS = [
    [1.0, 1.0],
    [0.3, -0.7, 1.1],
    [2.5, -1.25, 0.75, 3.0, -0.2],
    [90.0, -130.0, 610.0],
]


def main():
    cases = []
    for name, f in BASES.items():
        for p in POINTS:
            cases.append({"base": name, "x": p, "value": f(p)})
    print(json.dumps({"cases": cases}, indent=1))


if __name__ == "__main__":
    main()
