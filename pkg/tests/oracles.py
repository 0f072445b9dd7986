"""Brute-force oracles, written without the package's linear algebra."""

from itertools import combinations_with_replacement, product

from highdesc.groupoid import connected_groupoid, disjoint_union_groupoid, groups_up_to_order, pair_groupoid


def group_cohomology_order(elements, mul, n, p):
    """|H^n(G; Z/p)| with trivial action, by enumerating every cochain on G^n
    and G^(n-1) and quotienting cocycles by coboundaries."""

    def delta(c, k):
        # c: dict on G^k -> Z/p; returns dict on G^(k+1)
        out = {}
        for g in product(elements, repeat=k + 1):
            v = c[g[1:]]
            for i in range(k):
                v += (-1) ** (i + 1) * c[g[:i] + (mul[(g[i], g[i + 1])],) + g[i + 2:]]
            v += (-1) ** (k + 1) * c[g[:-1]]
            out[g] = v % p
        return out

    def cochains(k):
        keys = list(product(elements, repeat=k))
        for vals in product(range(p), repeat=len(keys)):
            yield dict(zip(keys, vals))

    zero = None
    cocycles = 0
    for c in cochains(n):
        d = delta(c, n)
        if zero is None:
            zero = {g: 0 for g in d}
        cocycles += d == zero
    boundaries = {tuple(sorted(delta(b, n - 1).items())) for b in cochains(n - 1)}
    return cocycles // len(boundaries)


def component_types(max_morphisms):
    """Connected groupoids pair(n) x B(G) with n^2 |G| <= max_morphisms."""
    out = []
    for n in (1, 2, 3):
        for G in groups_up_to_order(min(7, max_morphisms)):
            if n * n * G.order() <= max_morphisms:
                out.append((n * n * G.order(), n, G))
    return out


def groupoids_up_to_iso(max_morphisms):
    """Every finite groupoid with at most ``max_morphisms`` morphisms, one per
    isomorphism class (a groupoid is a multiset of connected components)."""
    types = component_types(max_morphisms)
    result = []
    for k in range(1, max_morphisms + 1):
        for combo in combinations_with_replacement(range(len(types)), k):
            if sum(types[i][0] for i in combo) > max_morphisms:
                continue
            parts = []
            for i in combo:
                _, n, G = types[i]
                parts.append(connected_groupoid(n, G) if G.order() > 1 else pair_groupoid(n))
            result.append(parts[0] if len(parts) == 1 else disjoint_union_groupoid(parts))
    return result


def ff_oracle(F):
    """Fully faithful by counting: every hom set maps bijectively."""
    G, L = F.source, F.target
    for x in G.objects:
        for y in G.objects:
            images = [F.F1(f) for f in G.hom(x, y)]
            if len(set(images)) != len(images) or len(images) != len(L.hom(F.F0(x), F.F0(y))):
                return False
    return True


def es_oracle(F):
    """Essentially surjective: every orbit of the target meets the image."""
    image = set(F.on_objects.values())
    return all(orb & image for orb in F.target.orbits())


def cech_cocycle_count(pi, degree, p):
    """Closed Z/p cochains on Y^[degree+1] for the cover map ``pi`` (a dict y -> m),
    with the alternating Cech coboundary, by enumeration."""
    Y = sorted(pi, key=repr)

    def tuples(n):
        return [t for t in product(Y, repeat=n) if len({pi[y] for y in t}) == 1]

    cells, cofaces = tuples(degree + 1), tuples(degree + 2)
    count = 0
    for vals in product(range(p), repeat=len(cells)):
        c = dict(zip(cells, vals))
        if all(sum((-1) ** i * c[t[:i] + t[i + 1:]] for i in range(degree + 2)) % p == 0 for t in cofaces):
            count += 1
    return count
