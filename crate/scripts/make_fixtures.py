#!/usr/bin/env python3
"""Write the bundled polynomial and fiducial fixtures for d = 5 and d = 11."""
import math
import os
import sys
from fractions import Fraction

OUT = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "crates", "core", "fixtures")

# (a, b) stands for a + b*sqrt(m); lists run from the x^N pair inward.
F5 = [(1, 0), (-8, -5), (53, 30), (-156, -90), (225, 130)]
G5 = [(1296, 0), (-648, -1080), (648, 0), (864, 360), (-540, -360), (144, 60), (18, 0), (-3, -5), (1, 0)]

F11_PAIRS = [
    (1, 0), (-106, -44), (10614, 4334), (-652115, -266222), (27825305, 11359634),
    (-877414856, -358203120), (21232702036, 8668214302), (-404105217077, -164975264036),
    (6148885983306, 2510272190954), (-75622522312964, -30872765454828),
    (756937617777704, 309018488445524), (-6189687857216636, -2526929486213638),
    (41399992237530827, 16901476056189164), (-226256732983154420, -92368924446311502),
    (1007258543741292244, 411211578537502754), (-3634879852543059214, -1483933485842242424),
    (10563883893311542549, 4312687540103174716), (-24534973105051444408, -10016360826714109164),
    (45162757813812803926, 18437618670122548666), (-65380387193394562674, -26691431301568773124),
]
F11_MID = (74013773227204686051, 30215996390786346646)

# c_k multiplies 12^{20-k} x^{40-k} + x^k
G11_PAIRS = [
    (1, 0), (48, 22), (1968, 792), (25848, 10560), (-419472, -171072),
    (-18892224, -7714080), (-181457280, -74074176), (2141686656, 874329984),
    (62948109312, 25698435840), (337583904768, 137818340352),
    (-5182578339840, -2115780175872), (-83855167709184, -34233724293120),
    (-202894373007360, -82831288725504), (4929898807885824, 2012622741651456),
    (47257471319703552, 19292782106492928), (45726669189808128, 18667833415925760),
    (-1783877902738587648, -728265100678004736), (-11823467430652674048, -4826910371186737152),
    (-11846897461773729792, -4836475651119906816), (215144426763866603520, 87832344582220677120),
]
G11_MID = (1246186807345680482304, 508753633031010385920)

V5 = [
    "0.24167903563278788347",
    "-0.42393763943145804455 - 0.23674553208033493698i",
    "0.67406464953559540185 + 0.19581007881800632630i",
    "0.04040992380093525849 - 0.19581007881800632630i",
    "0.34218699574986301405 + 0.23674553208033493698i",
]

# the sixth entry is printed without its imaginary unit; it is restored here
V11 = [
    "0.31885501173446151953",
    "-0.00727092982813886277 - 0.27361988848296183641i",
    "-0.02661472547965484998 - 0.37021984761997660380i",
    "0.26103622782810404567 - 0.17519492308655237763i",
    "-0.17130782441847984905 - 0.00498132225998709619i",
    "0.115894663935244395576 + 0.023682353557509036148i",
    "-0.20515008071739008667 - 0.15408741485673275946i",
    "-0.12010487681658182011 + 0.12297653825975158437i",
    "0.24462906391022207471 - 0.16496679971724189093i",
    "0.56644313698737356128 + 0.07879109944268139950i",
    "0.16629395529532658791 - 0.07929717656822654842i",
]


def fmt(a, b):
    a, b = Fraction(a), Fraction(b)
    r = math.lcm(a.denominator, b.denominator)
    p, q = int(a * r), int(b * r)
    sign = "-" if q < 0 else "+"
    return f"{p}/{r} {sign} {abs(q)}/{r} * sqrt(M)"


def write_poly(name, d, m, role, desc):
    """desc: coefficients from x^N down to x^0 as (a, b)."""
    lines = ["# stark-sic polynomial", f"# d={d}", f"# degree={len(desc) - 1}", f"# role={role}", f"# radicand={m}"]
    lines += [fmt(a, b).replace("M", str(m)) for a, b in desc]
    with open(os.path.join(OUT, name), "w") as fh:
        fh.write("\n".join(lines) + "\n")


def palindrome(pairs, mid):
    return pairs + [mid] + pairs[::-1]


def scaled(pairs, mid, base, half):
    top = [(a * base ** (half - k), b * base ** (half - k)) for k, (a, b) in enumerate(pairs)]
    return top + [mid] + pairs[::-1]


def write_vec(name, d, entries):
    with open(os.path.join(OUT, name), "w") as fh:
        fh.write(f"# stark-sic fiducial\n# d={d}\n" + "\n".join(entries) + "\n")


def main():
    os.makedirs(OUT, exist_ok=True)
    f5 = F5 + F5[:4][::-1]
    write_poly("f5.txt", 5, 3, "f", f5)
    write_poly("g5.txt", 5, 3, "g", G5)
    write_poly("gt5.txt", 5, 3, "gtilde", [(a, -b) for a, b in G5])
    write_vec("v5.txt", 5, V5)
    write_poly("f11.txt", 11, 6, "f", palindrome(F11_PAIRS, F11_MID))
    write_poly("g11.txt", 11, 6, "g", scaled(G11_PAIRS, G11_MID, 12, 20))
    write_vec("v11.txt", 11, V11)


if __name__ == "__main__":
    main()
