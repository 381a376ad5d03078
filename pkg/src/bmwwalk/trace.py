"""
Restricted trace, shifted basis, and the trace-norm convergence bound.

The restricted trace pairs basis elements to 1 exactly when both are
permutation diagrams and inverse to each other; it vanishes identically
on a communication class with horizontal edges. The shifted basis repairs
that degeneracy: each class element x gains a permutation companion s_x
weighted by pi_x(x)^{-1/2}, its starred partner x* gains s_x^{-1}, and
the bilinear form becomes nondegenerate on the doubled index set
X1 ∪ X2 ∪ S.

All values live in Q(sqrt(theta), sqrt(Z)) with Z the class normalizer,
so every identity here is checked as an exact coordinate equality and the
convergence inequality's sign is decided exactly.

One deliberate deviation from the source material: the translate identity
correction term pairs f(x) with g(s_x), not g(s_x^{-1}). The symmetric
bilinear expansion of the inner-product table forces this form (and the
exact checks confirm it); the other form fails already for single-step
chain columns. check_translate_identity evaluates both and reports them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .brauer import BrauerDiagram, inverse, is_permutation
from .chains import FixedPointError, ScanChain, restrict, validate_theta
from .classes import CommClass, SAssignment, StarPairing, perm_order, star_pairing
from .scalars import DEFAULT_SIGN_BITS_CAP, ExtScalar, QuadField
from .words import length_table

X1, X2, SPLUS, SMINUS = "x1", "x2", "s+", "s-"
_KINDS = (X1, X2, SPLUS, SMINUS)
_STAR = {X1: X2, X2: X1, SPLUS: SMINUS, SMINUS: SPLUS}


def tau_pair(x: BrauerDiagram, y: BrauerDiagram) -> int:
    """tau(T_x T_y): 1 iff x and y are mutually inverse permutations."""
    if not (is_permutation(x) and is_permutation(y)):
        return 0
    return 1 if y == inverse(x) else 0


@dataclass(frozen=True)
class ShiftedBasis:
    """Index data for one star-paired class with its s-assignment.

    Positions are laid out as [X1 | X2 | S+ | S-], each block in class_a
    member order; position j in X2 is the star image of member j, S+ holds
    s_j and S- holds s_j^{-1}.
    """

    pairing: StarPairing
    assignment: SAssignment
    theta: Fraction
    field: QuadField
    pi_values: tuple[Fraction, ...]  # class-stationary weight per member
    length_shift: int  # L(w*) - L(w), constant over the class

    @property
    def k(self) -> int:
        return len(self.pairing.class_a.members)

    @property
    def size(self) -> int:
        return 4 * self.k

    def kind_of(self, pos: int) -> str:
        return _KINDS[pos // self.k]

    def base_of(self, pos: int) -> int:
        return pos % self.k

    def position(self, kind: str, j: int) -> int:
        return _KINDS.index(kind) * self.k + j

    def star_position(self, pos: int) -> int:
        return self.position(_STAR[self.kind_of(pos)], self.base_of(pos))

    def element_of(self, pos: int) -> BrauerDiagram:
        kind, j = self.kind_of(pos), self.base_of(pos)
        if kind == X1:
            return self.pairing.class_a.members[j]
        if kind == X2:
            return self.pairing.images[j]
        if kind == SPLUS:
            return self.assignment.perms[j]
        return inverse(self.assignment.perms[j])

    def weight(self, pos: int) -> Fraction:
        """The diagonal stationary weight pi-hat_x(x) at this position."""
        if self.kind_of(pos) in (X1, X2):
            return self.pi_values[self.base_of(pos)]
        return Fraction(1)

    def sqrt_pi_inv(self, j: int) -> ExtScalar:
        """pi_j^{-1/2} = theta^{L_j/2} * sqrt(Z)."""
        lengths = length_table(self.pairing.class_a.n)
        lj = lengths[self.pairing.class_a.members[j]][2]
        return self.field.theta_half_power(lj) * self.field.sqrt_z()

    def sqrt_pi(self, j: int) -> ExtScalar:
        return self.sqrt_pi_inv(j) * self.pi_values[j]

    def hat_vector(self, pos: int) -> tuple[tuple[BrauerDiagram, ExtScalar], ...]:
        """The shifted basis element in unshifted coordinates."""
        kind, j = self.kind_of(pos), self.base_of(pos)
        one = self.field.one()
        if kind == X1:
            return (
                (self.pairing.class_a.members[j], one),
                (self.assignment.perms[j], self.sqrt_pi_inv(j)),
            )
        if kind == X2:
            return (
                (self.pairing.images[j], one),
                (inverse(self.assignment.perms[j]), self.sqrt_pi_inv(j)),
            )
        if kind == SPLUS:
            return ((self.assignment.perms[j], one),)
        return ((inverse(self.assignment.perms[j]), one),)


def build_shifted_basis(
    pairing: StarPairing, assignment: SAssignment, theta: Fraction
) -> ShiftedBasis:
    theta = validate_theta(theta)
    if assignment.members != pairing.class_a.members:
        raise ValueError("assignment must cover class_a in member order")
    for g in assignment.perms:
        if perm_order(g) <= 2:
            raise ValueError("s-assignment contains an element of order <= 2")
    perms = set(assignment.perms)
    if len(perms) != len(assignment.perms):
        raise ValueError("s-assignment repeats a permutation")
    if any(inverse(g) in perms for g in assignment.perms):
        raise ValueError("s-assignment contains an inverse pair")

    n = pairing.class_a.n
    lengths = length_table(n)
    members = pairing.class_a.members
    shifts = {
        lengths[ws][2] - lengths[w][2] for w, ws in zip(members, pairing.images)
    }
    if len(shifts) != 1:
        raise ValueError(
            f"star pairing does not shift lengths by a constant: {sorted(shifts)}"
        )
    shift = shifts.pop()

    z = sum((theta ** -lengths[w][2] for w in members), Fraction(0))
    pi_values = tuple(theta ** -lengths[w][2] / z for w in members)
    z2 = sum((theta ** -lengths[ws][2] for ws in pairing.images), Fraction(0))
    pi2 = tuple(theta ** -lengths[ws][2] / z2 for ws in pairing.images)
    if pi2 != pi_values:
        raise ValueError("paired class stationary values disagree with class_a's")

    return ShiftedBasis(
        pairing=pairing,
        assignment=assignment,
        theta=theta,
        field=QuadField(theta, z),
        pi_values=pi_values,
        length_shift=shift,
    )


def _lemma_table(basis: ShiftedBasis, p: int, q: int) -> ExtScalar:
    """Closed-form inner products of shifted basis elements."""
    kind, j = basis.kind_of(p), basis.base_of(p)
    qkind, qj = basis.kind_of(q), basis.base_of(q)
    zero = basis.field.zero()
    if qj != j:
        return zero
    pi_inv = basis.field.from_rational(1 / basis.pi_values[j])
    half = basis.sqrt_pi_inv(j)
    one = basis.field.one()
    table = {
        (X1, X2): pi_inv,
        (X2, X1): pi_inv,
        (X1, SMINUS): half,
        (SMINUS, X1): half,
        (X2, SPLUS): half,
        (SPLUS, X2): half,
        (SPLUS, SMINUS): one,
        (SMINUS, SPLUS): one,
    }
    return table.get((kind, qkind), zero)


def inner_shifted(basis: ShiftedBasis, p: int, q: int) -> ExtScalar:
    """<T-hat_p, T-hat_q>_BMW, expanded from tau and checked against the table."""
    acc = basis.field.zero()
    for dx, cx in basis.hat_vector(p):
        for dy, cy in basis.hat_vector(q):
            if tau_pair(dx, dy):
                acc = acc + cx * cy
    expected = _lemma_table(basis, p, q)
    if not (acc - expected).is_zero():
        raise AssertionError(
            f"first-principles inner product disagrees with the closed form at ({p},{q})"
        )
    return acc


def gram_support(basis: ShiftedBasis) -> tuple[tuple[int, int, ExtScalar], ...]:
    """Sparse support of the bilinear form on the shifted index set."""
    out = []
    for j in range(basis.k):
        pi_inv = basis.field.from_rational(1 / basis.pi_values[j])
        half = basis.sqrt_pi_inv(j)
        one = basis.field.one()
        pos = {kind: basis.position(kind, j) for kind in _KINDS}
        for a, b, v in (
            (X1, X2, pi_inv),
            (X1, SMINUS, half),
            (X2, SPLUS, half),
            (SPLUS, SMINUS, one),
        ):
            out.append((pos[a], pos[b], v))
            out.append((pos[b], pos[a], v))
    return tuple(out)


Vector = tuple[ExtScalar, ...]


@dataclass(frozen=True)
class KhatMatrix:
    """The chain in shifted coordinates: dense columns over ExtScalar."""

    basis: ShiftedBasis
    columns: tuple[Vector, ...]

    def matvec(self, v: Vector) -> Vector:
        size = self.basis.size
        zero = self.basis.field.zero()
        out = [zero] * size
        for c in range(size):
            vc = v[c]
            if vc.is_zero():
                continue
            col = self.columns[c]
            for r in range(size):
                if not col[r].is_zero():
                    out[r] = out[r] + col[r] * vc
        return tuple(out)

    def unit_column(self, pos: int) -> Vector:
        zero, one = self.basis.field.zero(), self.basis.field.one()
        return tuple(one if r == pos else zero for r in range(self.basis.size))

    def stationary_column(self, pos: int) -> Vector:
        """[pi-hat]_pos, verified to be an exact fixed point."""
        vec = khat_stationary(self.basis, pos)
        image = self.matvec(vec)
        if any(not (a - b).is_zero() for a, b in zip(image, vec)):
            raise FixedPointError("pi-hat column is not fixed by K-hat")
        return vec


def build_khat(chain: ScanChain, basis: ShiftedBasis) -> KhatMatrix:
    """Change-of-basis image of the class-pair chain, built entrywise.

    Class columns keep their chain entries; the s-row of column x carries
    (1 - K(x,x))·pi_x(x)^{-1/2} at s_x and -K(x,z)·pi_z(z)^{-1/2} at s_z
    for the other class members z; s-columns are identity.
    """
    k = basis.k
    field = basis.field
    zero = field.zero()
    a1 = restrict(chain, basis.pairing.class_a.members)
    a2 = restrict(chain, basis.pairing.images)
    size = basis.size
    cols: list[list[ExtScalar]] = [[zero] * size for _ in range(size)]
    for j in range(k):
        src = basis.position(X1, j)
        cols[src][basis.position(SPLUS, j)] = basis.sqrt_pi_inv(j)
        for t, v in a1.columns[j]:
            cols[src][basis.position(X1, t)] += field.from_rational(v)
            cols[src][basis.position(SPLUS, t)] += -basis.sqrt_pi_inv(t) * v
        src = basis.position(X2, j)
        cols[src][basis.position(SMINUS, j)] = basis.sqrt_pi_inv(j)
        for t, v in a2.columns[j]:
            cols[src][basis.position(X2, t)] += field.from_rational(v)
            cols[src][basis.position(SMINUS, t)] += -basis.sqrt_pi_inv(t) * v
        for kind in (SPLUS, SMINUS):
            src = basis.position(kind, j)
            cols[src][src] = field.one()
    return KhatMatrix(basis, tuple(tuple(col) for col in cols))


def conjugation_khat(chain: ScanChain, basis: ShiftedBasis) -> KhatMatrix:
    """Independent oracle: E^{-1}·K-tilde·E on the active subspace.

    E maps shifted coordinates to unshifted ones (columns are the hat
    vectors); K-tilde is block diagonal with the two class submatrices and
    the identity on the s-rows.
    """
    k, size = basis.k, basis.size
    field = basis.field
    zero, one = field.zero(), field.one()
    a1 = restrict(chain, basis.pairing.class_a.members)
    a2 = restrict(chain, basis.pairing.images)

    ktilde = [[zero] * size for _ in range(size)]
    for j in range(k):
        for t, v in a1.columns[j]:
            ktilde[t][j] = field.from_rational(v)
        for t, v in a2.columns[j]:
            ktilde[k + t][k + j] = field.from_rational(v)
    for p in range(2 * k, size):
        ktilde[p][p] = one

    e = [[zero] * size for _ in range(size)]
    einv = [[zero] * size for _ in range(size)]
    for p in range(size):
        e[p][p] = one
        einv[p][p] = one
    for j in range(k):
        e[basis.position(SPLUS, j)][basis.position(X1, j)] = basis.sqrt_pi_inv(j)
        e[basis.position(SMINUS, j)][basis.position(X2, j)] = basis.sqrt_pi_inv(j)
        einv[basis.position(SPLUS, j)][basis.position(X1, j)] = -basis.sqrt_pi_inv(j)
        einv[basis.position(SMINUS, j)][basis.position(X2, j)] = -basis.sqrt_pi_inv(j)

    def matmul(a, b):
        out = [[zero] * size for _ in range(size)]
        for r in range(size):
            for m in range(size):
                if a[r][m].is_zero():
                    continue
                arm = a[r][m]
                for c in range(size):
                    if not b[m][c].is_zero():
                        out[r][c] = out[r][c] + arm * b[m][c]
        return out

    khat = matmul(matmul(einv, ktilde), e)
    cols = tuple(tuple(khat[r][c] for r in range(size)) for c in range(size))
    return KhatMatrix(basis, cols)


def khat_stationary(basis: ShiftedBasis, pos: int) -> Vector:
    """The stationary column [pi-hat]_x for a start in the shifted set."""
    field = basis.field
    zero = field.zero()
    out = [zero] * basis.size
    kind, j = basis.kind_of(pos), basis.base_of(pos)
    if kind in (SPLUS, SMINUS):
        out[pos] = field.one()
        return tuple(out)
    class_kind, s_kind = (X1, SPLUS) if kind == X1 else (X2, SMINUS)
    for t in range(basis.k):
        out[basis.position(class_kind, t)] = field.from_rational(basis.pi_values[t])
        out[basis.position(s_kind, t)] = -basis.sqrt_pi(t)
    out[basis.position(s_kind, j)] += basis.sqrt_pi_inv(j)
    return tuple(out)


def l2_shifted(basis: ShiftedBasis, f: Vector, g: Vector) -> ExtScalar:
    """<f, g>_2 with the diagonal stationary weights (1 on the s-block)."""
    acc = basis.field.zero()
    for p in range(basis.size):
        if f[p].is_zero() or g[p].is_zero():
            continue
        acc = acc + f[p] * g[p] * basis.weight(p)
    return acc


def bmw_inner(basis: ShiftedBasis, f: Vector, g: Vector) -> ExtScalar:
    """The bilinear extension of the shifted-basis trace form."""
    acc = basis.field.zero()
    for p, q, v in gram_support(basis):
        if not f[p].is_zero() and not g[q].is_zero():
            acc = acc + f[p] * g[q] * v
    return acc


def star_permute(basis: ShiftedBasis, f: Vector) -> Vector:
    """f composed with the star involution (x <-> x*, s <-> s^{-1})."""
    return tuple(f[basis.star_position(p)] for p in range(basis.size))


@dataclass(frozen=True)
class TranslateIdentityReport:
    lhs: ExtScalar
    bmw_term: ExtScalar
    correction: ExtScalar
    correction_paper_literal: ExtScalar
    holds: bool
    paper_literal_holds: bool


def check_translate_identity(basis: ShiftedBasis, f: Vector, g: Vector) -> TranslateIdentityReport:
    """Exact check of <f/pi-hat, g/pi-hat>_2 = <f, g*>_BMW - correction.

    The correction sums [f(x)·g(s_x) + f(s_x^{-1})·g(x*)] / pi_x(x)^{1/2}
    over x in X1 ∪ X2 with s_{x*} = s_x^{-1}. The literal form printed in
    the source material uses g(s_x^{-1}) in the first product; both are
    evaluated so the report shows the literal form failing.
    """
    lhs = basis.field.zero()
    for p in range(basis.size):
        if not f[p].is_zero() and not g[p].is_zero():
            lhs = lhs + f[p] * g[p] / basis.weight(p)
    bmw_term = bmw_inner(basis, f, star_permute(basis, g))

    corr = basis.field.zero()
    corr_paper = basis.field.zero()
    for j in range(basis.k):
        inv_half = basis.sqrt_pi_inv(j)
        x1, x2 = basis.position(X1, j), basis.position(X2, j)
        sp, sm = basis.position(SPLUS, j), basis.position(SMINUS, j)
        # x = member_j (s_x = s_j), then x = member_j* (s_x = s_j^{-1}).
        corr = corr + (f[x1] * g[sp] + f[sm] * g[x2]) * inv_half
        corr = corr + (f[x2] * g[sm] + f[sp] * g[x1]) * inv_half
        corr_paper = corr_paper + (f[x1] * g[sm] + f[sm] * g[x2]) * inv_half
        corr_paper = corr_paper + (f[x2] * g[sp] + f[sp] * g[x1]) * inv_half

    holds = (lhs - (bmw_term - corr)).is_zero()
    paper_holds = (lhs - (bmw_term - corr_paper)).is_zero()
    return TranslateIdentityReport(lhs, bmw_term, corr, corr_paper, holds, paper_holds)


@dataclass(frozen=True)
class Main2Row:
    """One start/step evaluation of the convergence bound."""

    start: int
    step: int
    lhs: ExtScalar
    rhs: ExtScalar
    gap_sign: int
    lhs_to_stationary: ExtScalar
    rhs_to_stationary: ExtScalar


@dataclass(frozen=True)
class Main2Report:
    rows: tuple[Main2Row, ...]

    @property
    def all_nonnegative(self) -> bool:
        return all(row.gap_sign >= 0 for row in self.rows)


def check_main2(
    khat: KhatMatrix,
    steps: int,
    bits_cap: int = DEFAULT_SIGN_BITS_CAP,
    starts: tuple[int, ...] | None = None,
) -> Main2Report:
    """Per start and step: ||[K-hat^m/pi-hat]_x - 1||_2^2 vs the BMW norm.

    The asserted reading takes 1 to be the constant-one function on the
    whole shifted index set and the BMW norm of h as <h, h*>_BMW. The
    distance-to-stationarity reading (subtracting the stationary column
    instead of 1) is reported alongside: its left side is the chi-square
    distance that actually converges to zero, while its BMW side vanishes
    identically because v(s_x) + v(x)/sqrt(pi) is conserved by K-hat.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    basis = khat.basis
    field = basis.field
    one = field.one()
    ones = tuple(one for _ in range(basis.size))
    if starts is None:
        starts = tuple(range(2 * basis.k))
    rows = []
    for start in starts:
        stat = khat.stationary_column(start)
        v = khat.unit_column(start)
        for m in range(1, steps + 1):
            v = khat.matvec(v)
            lhs = field.zero()
            for p in range(basis.size):
                diff = v[p] - basis.weight(p)
                lhs = lhs + diff * diff / basis.weight(p)
            u = tuple(v[p] - ones[p] for p in range(basis.size))
            rhs = bmw_inner(basis, u, star_permute(basis, u))
            u2 = tuple(v[p] - stat[p] for p in range(basis.size))
            lhs2 = field.zero()
            for p in range(basis.size):
                lhs2 = lhs2 + u2[p] * u2[p] / basis.weight(p)
            rhs2 = bmw_inner(basis, u2, star_permute(basis, u2))
            gap = rhs - lhs
            rows.append(
                Main2Row(start, m, lhs, rhs, gap.sign(bits_cap), lhs2, rhs2)
            )
    return Main2Report(tuple(rows))


@dataclass(frozen=True)
class ShiftedSetup:
    """Convenience bundle: paired classes, basis, chain, and K-hat."""

    basis: ShiftedBasis
    chain: ScanChain
    khat: KhatMatrix


def make_setup(
    class_a: CommClass,
    class_b: CommClass,
    theta: Fraction,
    chain: ScanChain,
) -> ShiftedSetup:
    from .classes import pick_s_assignment

    pairing = star_pairing(class_a, class_b)
    assignment = pick_s_assignment(class_a)
    basis = build_shifted_basis(pairing, assignment, theta)
    return ShiftedSetup(basis, chain, build_khat(chain, basis))
