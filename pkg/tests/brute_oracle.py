"""Independent brute-force twin of the net pipeline, for toy-size cross checks.

Everything here is recomputed from first principles with Fractions and
double loops: no CSR graphs, no jit kernels, no shared code paths beyond the
word lists.  Deliberately slow and only usable at toy sizes.
"""
import itertools
from fractions import Fraction

from diagsep.symbolic import SubshiftSystem


def brute_fullshift_language(length: int) -> list[str]:
    return ["".join(bits) for bits in itertools.product("01", repeat=length)]


def brute_word_metric(w1: str, w2: str, two_sided: bool) -> Fraction:
    if w1 == w2:
        return Fraction(0)
    if two_sided:
        k = (len(w1) - 1) // 2
        for j in range(k + 1):
            if w1[k + j] != w2[k + j] or w1[k - j] != w2[k - j]:
                return Fraction(1, 2 ** j)
    for j in range(len(w1)):
        if w1[j] != w2[j]:
            return Fraction(1, 2 ** j)
    raise AssertionError


class BruteNet:
    """Node table, exact edge set, Floyd-Warshall distances."""

    def __init__(self, system: SubshiftSystem, words: list[str], depth: int, levels: int):
        self.system = system
        self.words = list(words)
        self.depth = depth
        self.levels = levels
        lang = set(words)
        if system.kind == "odometer2":
            self.succ = {
                w: [format((int(w[::-1], 2) + 1) % (1 << depth), f"0{depth}b")[::-1]]
                for w in words
            }
        else:
            self.succ = {
                w: [w[1:] + a for a in "01" if w[1:] + a in lang] for w in words
            }
        self.glue = {w: min(self.succ[w]) for w in words}
        self.nodes = [(w, l) for w in words for l in range(levels)]
        self.index = {node: i for i, node in enumerate(self.nodes)}
        n = len(self.nodes)
        INF = Fraction(10 ** 9)
        dist = [[INF] * n for _ in range(n)]
        for i in range(n):
            dist[i][i] = Fraction(0)

        def connect(u, v, w):
            i, j = self.index[u], self.index[v]
            if w < dist[i][j]:
                dist[i][j] = dist[j][i] = w

        cut = Fraction(1, 2 ** (depth - 1))
        for w in words:
            for l in range(levels - 1):
                connect((w, l), (w, l + 1), Fraction(1, levels))
            for v in self.succ[w]:
                connect((w, levels - 1), (v, 0), Fraction(1, levels))
        for w1, w2 in itertools.combinations(words, 2):
            d = brute_word_metric(w1, w2, system.two_sided)
            if d <= cut:
                for l in range(levels):
                    connect((w1, l), (w2, l), d)
        for mid in range(n):
            row_mid = dist[mid]
            for i in range(n):
                dim = dist[i][mid]
                row_i = dist[i]
                for j in range(n):
                    alt = dim + row_mid[j]
                    if alt < row_i[j]:
                        row_i[j] = alt
        self.dist = dist

    def classify(self, w1: str, l1: Fraction, w2: str, l2: Fraction, delta: Fraction):
        two = self.system.two_sided
        diag = (
            brute_word_metric(w1, w2, two) < delta and abs(l2 - l1) < delta
        )
        fwd = (
            l1 < delta
            and l2 > 1 - delta
            and brute_word_metric(w1, self.glue[w2], two) < delta
        )
        bwd = (
            l2 < delta
            and l1 > 1 - delta
            and brute_word_metric(self.glue[w1], w2, two) < delta
        )
        return diag, fwd, bwd

    def modulus(self, delta: Fraction) -> Fraction:
        reps = [
            (w, l) for w in self.words for l in range(self.levels + 1)
        ]

        def node_of(rep):
            w, l = rep
            return self.index[(self.glue[w], 0)] if l == self.levels else self.index[(w, l)]

        best = Fraction(0)
        for r1 in reps:
            for r2 in reps:
                rho = brute_word_metric(r1[0], r2[0], self.system.two_sided) + Fraction(
                    abs(r1[1] - r2[1]), self.levels
                )
                if rho < 2 * delta:
                    best = max(best, self.dist[node_of(r1)][node_of(r2)])
        return best


class BruteProduct:
    """Double-loop adjacency, flood-fill components, exhaustive bracket scan."""

    def __init__(self, bnet: BruteNet, theta: Fraction, delta: Fraction):
        self.bnet = bnet
        self.theta = theta
        self.delta = delta
        n = len(bnet.nodes)
        self.n_base = n
        m = bnet.levels
        self.excluded = []
        for (w1, l1) in bnet.nodes:
            for (w2, l2) in bnet.nodes:
                flags = bnet.classify(w1, Fraction(l1, m), w2, Fraction(l2, m), delta)
                self.excluded.append(any(flags))

    def adjacent(self, i: int, j: int) -> bool:
        if i == j:
            return False
        n = self.n_base
        a, b = divmod(i, n)
        c, d = divmod(j, n)
        return self.bnet.dist[a][c] <= self.theta and self.bnet.dist[b][d] <= self.theta

    def kept_edge_count(self) -> int:
        n2 = self.n_base * self.n_base
        count = 0
        for i in range(n2):
            if self.excluded[i]:
                continue
            for j in range(i + 1, n2):
                if not self.excluded[j] and self.adjacent(i, j):
                    count += 1
        return count

    def components(self) -> list[int]:
        """Flood-fill labels over kept nodes, numbered by minimum node id."""
        n2 = self.n_base * self.n_base
        labels = [-1] * n2
        current = 0
        for start in range(n2):
            if self.excluded[start] or labels[start] >= 0:
                continue
            stack = [start]
            labels[start] = current
            while stack:
                i = stack.pop()
                for j in range(n2):
                    if labels[j] < 0 and not self.excluded[j] and self.adjacent(i, j):
                        labels[j] = current
                        stack.append(j)
            current += 1
        return labels

    def sandwich(self, eps_hat: Fraction):
        """(label violations, radius violations) over extended cells."""
        bnet = self.bnet
        m = bnet.levels
        reps = [(w, l) for w in bnet.words for l in range(m + 1)]

        def canonical(rep):
            w, l = rep
            return (bnet.glue[w], 0) if l == m else (w, l)

        label_bad = []
        radius_bad = []
        for r1 in reps:
            for r2 in reps:
                flags = bnet.classify(
                    r1[0], Fraction(r1[1], m), r2[0], Fraction(r2[1], m), self.delta
                )
                excl = any(flags)
                if canonical(r1) == canonical(r2) and not excl:
                    label_bad.append((r1, r2))
                if excl:
                    d = bnet.dist[bnet.index[canonical(r1)]][bnet.index[canonical(r2)]]
                    if d >= eps_hat:
                        radius_bad.append((r1, r2))
        return label_bad, radius_bad
