"""Change-of-generators moves and the normal-form search procedures.

Every move is the action of a mapping class on the images of the standard
generators, written so that the relator value [A_1,B_1]...[A_g,B_g]G_1...G_k
is preserved *exactly* as a matrix product (not just up to conjugacy).  The
twist, swap and transposition formulas are classical; the cross-handle move
carries conjugation decorations that make it exact:

    (A,B),(C,D) -> (A, B W D W^-1), ((B A^-1 B^-1) C, D),  W = A^-1 B^-1 C

which fixes [a,b][c,d] in the free group (verified in the tests, along with
the fact that the images generate, so this is a genuine automorphism).  On
linear parts of affine maps the decorations vanish: the move multiplies the
dilation factor b_i by b_j and divides a_j by a_i, exactly the bookkeeping
the normal-form lemmas use.

A MoveLog is a replayable list; replaying it on the original representation
reproduces the output bit for bit.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .moebius import (DEFAULT_TOL, MoebiusMap, commutator, fixed_in_plane)
from .scalars import IRRATIONAL, RATIONAL, UNKNOWN, AngleTag, TWO_PI, \
    rationalize_angle, wrap_angle
from .surface import DENSE, Representation, image_order_two, unitary_image

TWIST_CAP = 10**6
INTERLEAVE_CAP = 64
GCD_CAP = 10**4


class IndexOutOfRange(IndexError):
    pass


class GenusPartTrivial(ValueError):
    pass


class ModeUnavailable(ValueError):
    pass


class OrderTwoImage(ValueError):
    pass


class CoaxialInput(ValueError):
    pass


class NotDihedral(ValueError):
    pass


class NonTranslationCommutator(ValueError):
    pass


class MoveSearchExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class ElementaryMove:
    kind: str          # twist_a | twist_b | swap | cross | transpose |
                       # martens | braid
    i: int = 0
    j: int = 0
    n: int = 0

    def to_json(self) -> dict:
        return {"kind": self.kind, "i": self.i, "j": self.j, "n": self.n}

    @staticmethod
    def from_json(d: dict) -> "ElementaryMove":
        return ElementaryMove(d["kind"], d.get("i", 0), d.get("j", 0),
                              d.get("n", 0))


MoveLog = List[ElementaryMove]


def apply_move(rep: Representation, mv: ElementaryMove) -> Representation:
    g = rep.signature.genus
    k = rep.signature.punctures
    handles = list(rep.handles)
    periph = list(rep.peripherals)
    kind = mv.kind
    if kind in ("twist_a", "twist_b", "swap"):
        if not 0 <= mv.i < g:
            raise IndexOutOfRange(f"handle index {mv.i}")
        A, B = handles[mv.i]
        if kind == "twist_a":
            handles[mv.i] = (A, B * A.power(mv.n))
        elif kind == "twist_b":
            handles[mv.i] = (A * B.power(mv.n), B)
        else:
            handles[mv.i] = (A * B * A.inverse(), A.inverse())
    elif kind == "cross":
        if not 0 <= mv.i < g - 1:
            raise IndexOutOfRange(f"adjacent handle pair at {mv.i}")
        A, B = handles[mv.i]
        C, D = handles[mv.i + 1]
        W = A.inverse() * B.inverse() * C
        handles[mv.i] = (A, B * W * D * W.inverse())
        handles[mv.i + 1] = (B * A.inverse() * B.inverse() * C, D)
    elif kind == "transpose":
        if not 0 <= mv.i < g - 1:
            raise IndexOutOfRange(f"adjacent handle pair at {mv.i}")
        A, B = handles[mv.i]
        C, D = handles[mv.i + 1]
        K = commutator(A, B)
        handles[mv.i] = (K * C * K.inverse(), K * D * K.inverse())
        handles[mv.i + 1] = (A, B)
    elif kind == "martens":
        if not (0 <= mv.i < g and 0 <= mv.j < g and mv.i != mv.j):
            raise IndexOutOfRange(f"handle pair ({mv.i},{mv.j})")
        Aj, Bj = handles[mv.j]
        if not (Aj.is_identity() and Bj.is_identity()):
            raise ValueError("martens move requires a trivial target handle")
        Ai, Bi = handles[mv.i]
        handles[mv.j] = (MoebiusMap.identity(), Ai.power(mv.n) * Bi)
    elif kind == "braid":
        if not 0 <= mv.i < k - 1:
            raise IndexOutOfRange(f"adjacent puncture pair at {mv.i}")
        G1, G2 = periph[mv.i], periph[mv.i + 1]
        periph[mv.i] = G1 * G2 * G1.inverse()
        periph[mv.i + 1] = G1
    else:
        raise ValueError(f"unknown move kind {kind}")
    return Representation(rep.signature, handles, periph)


def apply_log(rep: Representation, log: Sequence[ElementaryMove]) -> Representation:
    for mv in log:
        rep = apply_move(rep, mv)
    return rep


def permute_punctures(rep: Representation, new_order: Sequence[int]) -> Tuple[Representation, MoveLog]:
    """Reorder peripherals by braid moves; conjugacy classes are preserved."""
    order = list(new_order)
    log: MoveLog = []
    pos = list(range(rep.signature.punctures))  # pos[p] = original index there
    for target in range(len(order)):
        src = pos.index(order[target])
        while src > target:
            rep = apply_move(rep, ElementaryMove("braid", i=src - 1))
            log.append(ElementaryMove("braid", i=src - 1))
            pos[src - 1], pos[src] = pos[src], pos[src - 1]
            src -= 1
    return rep, log


class _Worker:
    """Accumulates moves while transforming a representation."""

    def __init__(self, rep: Representation, log: Optional[MoveLog] = None):
        self.rep = rep
        self.log: MoveLog = list(log) if log else []

    def do(self, kind: str, i: int = 0, j: int = 0, n: int = 0):
        mv = ElementaryMove(kind, i, j, n)
        self.rep = apply_move(self.rep, mv)
        self.log.append(mv)

    def handle(self, i: int) -> Tuple[MoebiusMap, MoebiusMap]:
        return self.rep.handles[i]

    def bring_adjacent(self, left: int, right: int) -> Tuple[int, int]:
        """Transpose until the handle originally at `left` sits immediately
        before the one at `right`; returns their new (adjacent) positions."""
        if left == right:
            raise IndexOutOfRange("need two distinct handles")
        if left < right:
            while right > left + 1:
                self.do("transpose", i=right - 1)
                right -= 1
            return left, right
        # move `left` leftwards until adjacent, then swap the pair
        while left > right + 1:
            self.do("transpose", i=left - 1)
            left -= 1
        self.do("transpose", i=right)
        return right, right + 1


# ---------------------------------------------------------------------------
# Linear-part bookkeeping
# ---------------------------------------------------------------------------


def _linear(m: MoebiusMap) -> complex:
    a, _ = m.affine_parts()
    return a


def _arg_is_rational(m: MoebiusMap) -> Optional[bool]:
    tag = m.angle if m.angle is not None else AngleTag.unknown()
    if tag.kind == RATIONAL:
        return True
    if tag.kind == IRRATIONAL:
        return False
    return None  # undeclared


def _wrap_pi(t: float) -> float:
    """Angle in (-pi, pi]."""
    t = math.fmod(t, TWO_PI)
    if t <= -math.pi:
        t += TWO_PI
    if t > math.pi:
        t -= TWO_PI
    return t


# ---------------------------------------------------------------------------
# ensure_nontrivial_handles
# ---------------------------------------------------------------------------


def ensure_nontrivial_handles(rep: Representation,
                              tol: float = DEFAULT_TOL) -> Tuple[Representation, MoveLog]:
    """Make every handle-generator image non-trivial.

    Requires a non-trivial genus part; a handle with non-trivial monodromy
    donates it to the fully trivial handles.
    """
    g = rep.signature.genus
    if g == 0:
        return rep, []
    if all(a.is_identity(tol) and b.is_identity(tol) for a, b in rep.handles):
        raise GenusPartTrivial("all handle generators are trivial")
    w = _Worker(rep)

    def fix_half_trivial(i):
        A, B = w.handle(i)
        if A.is_identity(tol) and not B.is_identity(tol):
            w.do("twist_b", i=i, n=1)        # A' = A B = B
        elif B.is_identity(tol) and not A.is_identity(tol):
            w.do("twist_a", i=i, n=1)        # B' = B A = A
        A, B = w.handle(i)
        if A.is_identity(tol) or B.is_identity(tol):
            raise MoveSearchExhausted(f"handle {i} resists twisting")

    donor = next(i for i in range(g)
                 if not (w.handle(i)[0].is_identity(tol)
                         and w.handle(i)[1].is_identity(tol)))
    fix_half_trivial(donor)
    for i in range(g):
        A, B = w.handle(i)
        if A.is_identity(tol) and B.is_identity(tol):
            Ai, Bi = w.handle(donor)
            m = 1 if not (Ai * Bi).is_identity(tol) else 2
            w.do("martens", i=donor, j=i, n=m)
            w.do("twist_b", i=i, n=1)        # (Id, X) -> (X, X)
        fix_half_trivial(i)
    assert w.rep.relator_holds(1e-7)
    return w.rep, w.log


# ---------------------------------------------------------------------------
# normalize_coaxial
# ---------------------------------------------------------------------------

MODE_DILATION = "dilation_gt1"
MODE_IRRATIONAL = "irrational_args"
MODE_SMALL = "small_args"
MODE_SIGNED = "signed_small_args"


@dataclass
class NormalizeResult:
    rep: Representation
    log: MoveLog
    heuristic: bool = False


def normalize_coaxial(rep: Representation, eps: float = 0.1,
                      mode: str = MODE_DILATION,
                      tol: float = DEFAULT_TOL) -> NormalizeResult:
    """Drive every handle's dilation factors into the requested normal form.

    dilation_gt1:      |a_i|, |b_i| > 1 on every handle.
    irrational_args:   arg a_i, arg b_i not rational multiples of 2 pi.
    small_args:        additionally |arg a_i|, |arg b_i| < eps.
    signed_small_args: -eps < arg b_i < 0 and 0 <= arg a_i + arg b_i < eps.

    Argument modes require a dense unitary part; without declared polar input
    the rationality decisions are heuristic and flagged as such.  Properties
    are enforced in order and earlier ones re-checked, with a cap on the
    interleaving.
    """
    if not rep.all_affine(tol):
        raise ModeUnavailable("normalization needs an affine representation")
    g = rep.signature.genus
    if g == 0:
        return NormalizeResult(rep, [])
    rep2, log0 = ensure_nontrivial_handles(rep, tol)
    w = _Worker(rep2, log0)
    heuristic = False

    def moduli(i):
        A, B = w.handle(i)
        return abs(_linear(A)), abs(_linear(B))

    def args(i):
        A, B = w.handle(i)
        return _wrap_pi(cmath.phase(_linear(A))), _wrap_pi(cmath.phase(_linear(B)))

    def euclidean() -> bool:
        return all(abs(abs(_linear(x)) - 1.0) <= tol
                   for x in w.rep.generators() if not x.is_identity(tol))

    def make_moduli_off_one():
        donor = None
        for i in range(g):
            ma, mb = moduli(i)
            if abs(ma - 1.0) > tol:
                donor = i
                break
            if abs(mb - 1.0) > tol:
                w.do("swap", i=i)
                donor = i
                break
        if donor is None:
            raise ModeUnavailable("no handle has non-unit dilation modulus")
        for _round in range(g + 1):
            tgt = next((i for i in range(g)
                        if abs(moduli(i)[0] - 1.0) <= tol
                        and abs(moduli(i)[1] - 1.0) <= tol), None)
            if tgt is None:
                break
            ii, jj = w.bring_adjacent(donor, tgt)
            w.do("cross", i=ii)              # |a_jj| /= |a_ii|
            donor = ii
        for i in range(g):
            ma, mb = moduli(i)
            if abs(ma - 1.0) <= tol and abs(mb - 1.0) > tol:
                w.do("swap", i=i)
            ma, mb = moduli(i)
            if abs(mb - 1.0) <= tol and abs(ma - 1.0) > tol:
                w.do("twist_a", i=i, n=1)
            ma, mb = moduli(i)
            if abs(ma - 1.0) <= tol or abs(mb - 1.0) <= tol:
                raise MoveSearchExhausted(f"handle {i} stuck at unit modulus")

    def enforce_dilation(i):
        for _ in range(8):
            ma, mb = moduli(i)
            if ma > 1.0 + tol and mb > 1.0 + tol:
                return
            if mb < 1.0 or abs(mb - 1.0) <= tol:
                n = int(math.floor(-math.log(max(mb, 1e-300))
                                   / abs(math.log(ma)))) + 1
                n = max(1, min(n, TWIST_CAP))
                w.do("twist_a", i=i, n=n if ma > 1.0 else -n)
                continue
            if ma < 1.0:
                w.do("swap", i=i)            # (a, b) -> (b, 1/a)
                continue
        raise MoveSearchExhausted(f"dilation normal form oscillates at handle {i}")

    if mode == MODE_DILATION:
        if euclidean():
            raise ModeUnavailable("dilation normal form never holds for a "
                                  "Euclidean representation")
        make_moduli_off_one()
        for i in range(g):
            enforce_dilation(i)
        assert all(m > 1.0 for i in range(g) for m in moduli(i))
        assert w.rep.relator_holds(1e-7)
        return NormalizeResult(w.rep, w.log, heuristic)

    u = unitary_image(w.rep, tol)
    heuristic = u.heuristic
    if u.mode != DENSE:
        raise ModeUnavailable(f"mode {mode} needs a dense unitary part")
    strong = not euclidean()
    if strong:
        make_moduli_off_one()
        for i in range(g):
            enforce_dilation(i)

    def is_rat(m: MoebiusMap) -> bool:
        nonlocal heuristic
        r = _arg_is_rational(m)
        if r is None:
            heuristic = True
            return rationalize_angle(cmath.phase(_linear(m))) is not None
        return r

    def fix_second_gen(i):
        for _n in range(3):
            if not is_rat(w.handle(i)[1]):
                return
            w.do("twist_a", i=i, n=1)
        if is_rat(w.handle(i)[1]):
            raise MoveSearchExhausted(f"handle {i} second argument stays rational")

    def make_args_irrational():
        donor = None
        for i in range(g):
            A, B = w.handle(i)
            if not is_rat(A):
                donor = i
                break
            if not is_rat(B):
                w.do("swap", i=i)
                donor = i
                break
        if donor is None:
            raise ModeUnavailable("all arguments rational: unitary part not dense")
        fix_second_gen(donor)
        for _round in range(g + 1):
            tgt = next((i for i in range(g) if is_rat(w.handle(i)[0])), None)
            if tgt is None:
                break
            if strong:
                w.do("twist_b", i=tgt, n=3)  # grow |a| before dividing
            ii, jj = w.bring_adjacent(donor, tgt)
            w.do("cross", i=ii)              # arg a_jj -= arg a_ii
            donor = ii
            fix_second_gen(ii)               # cross touched b_ii
        for i in range(g):
            fix_second_gen(i)
            if is_rat(w.handle(i)[0]) or is_rat(w.handle(i)[1]):
                raise MoveSearchExhausted(f"handle {i} resists irrationality")

    def shrink_args(i):
        for _phase in range(INTERLEAVE_CAP):
            ta, tb = args(i)
            if abs(tb) >= eps:
                for n in range(1, TWIST_CAP):
                    if abs(_wrap_pi(n * ta + tb)) < eps * 0.9:
                        w.do("twist_a", i=i, n=n)
                        break
                else:
                    raise MoveSearchExhausted(f"small-argument twist cap at {i}")
                continue
            ta, tb = args(i)
            if abs(ta) >= eps:
                for n in range(1, TWIST_CAP):
                    if abs(_wrap_pi(ta + n * tb)) < eps * 0.9:
                        w.do("twist_b", i=i, n=n)
                        break
                else:
                    raise MoveSearchExhausted(f"small-argument twist cap at {i}")
                continue
            return
        raise MoveSearchExhausted(f"argument shrinking oscillates at handle {i}")

    def signed_args(i):
        for _phase in range(INTERLEAVE_CAP):
            ta, tb = args(i)
            if not (-eps < tb < 0.0):
                for n in range(1, TWIST_CAP):
                    cand = _wrap_pi(n * ta + tb)
                    if -eps * 0.9 < cand < -1e-15:
                        w.do("twist_a", i=i, n=n)
                        break
                else:
                    raise MoveSearchExhausted(f"signed twist cap at {i}")
                continue
            ta, tb = args(i)
            if not (0.0 <= _wrap_pi(ta + tb) < eps):
                for n in range(1, TWIST_CAP):
                    cand = _wrap_pi(ta + n * tb + tb)
                    if 0.0 <= cand < eps * 0.9:
                        w.do("twist_b", i=i, n=n)
                        break
                else:
                    raise MoveSearchExhausted(f"signed twist cap at {i}")
                continue
            return
        raise MoveSearchExhausted(f"signed arguments oscillate at handle {i}")

    make_args_irrational()
    if mode == MODE_IRRATIONAL:
        assert w.rep.relator_holds(1e-7)
        return NormalizeResult(w.rep, w.log, heuristic)
    for i in range(g):
        if mode == MODE_SMALL:
            shrink_args(i)
        elif mode == MODE_SIGNED:
            signed_args(i)
        else:
            raise ValueError(f"unknown mode {mode}")
    if strong:
        for i in range(g):
            if not all(m > 1.0 + tol for m in moduli(i)):
                enforce_dilation(i)
                shrink_args(i) if mode == MODE_SMALL else signed_args(i)
    assert w.rep.relator_holds(1e-7)
    return NormalizeResult(w.rep, w.log, heuristic)


# ---------------------------------------------------------------------------
# align_discrete_unitary
# ---------------------------------------------------------------------------


def _exponent(x: MoebiusMap, m: int) -> int:
    t = wrap_angle(cmath.phase(_linear(x))) / TWO_PI
    e = round(t * m)
    if abs(t * m - e) > 1e-6 * max(1, m):
        raise ValueError("unitary part is not an m-th root of unity")
    return e % m


def align_discrete_unitary(rep: Representation, m: int,
                           tol: float = DEFAULT_TOL) -> Tuple[Representation, MoveLog]:
    """Normal form for a discrete unitary part of order m: every alpha has
    unitary part exp(2 pi i/m) and every beta has unitary part 1."""
    if m == 2 and image_order_two(rep, tol):
        raise OrderTwoImage("image of order two is excluded")
    g = rep.signature.genus
    w = _Worker(rep)
    if m == 1 or g == 0:
        return w.rep, w.log

    def uv(i) -> Tuple[int, int]:
        A, B = w.handle(i)
        return _exponent(A, m), _exponent(B, m)

    def reduce_handle(i):
        """In-handle Euclid to (d, 0) mod m."""
        for _ in range(GCD_CAP):
            u, v = uv(i)
            if v == 0:
                return
            if u == 0:
                w.do("swap", i=i)            # (0, v) -> (v, 0) mod m
                continue
            if v >= u:
                w.do("twist_a", i=i, n=-(v // u))   # v -> v mod u
            else:
                w.do("twist_b", i=i, n=-(u // v))   # u -> u mod v
        raise MoveSearchExhausted("in-handle exponent reduction stalls")

    for i in range(g):
        reduce_handle(i)

    def euclid_pair(li, ri):
        """Subtractive gcd across adjacent positions (li, ri = li + 1);
        leaves 0 on the left and the gcd on the right."""
        for _ in range(GCD_CAP):
            a = uv(li)[0]
            b = uv(ri)[0]
            if a == 0:
                return
            if b == 0:
                w.do("transpose", i=li)
                continue
            if b >= a:
                w.do("cross", i=li)          # b -= a
            else:
                w.do("transpose", i=li)
        raise MoveSearchExhausted("cross-handle gcd stalls")

    # fold the gcd rightwards: handles 0..g-2 end at exponent 0
    for j in range(g - 1):
        euclid_pair(j, j + 1)
        reduce_handle(j)
        reduce_handle(j + 1)
    d = uv(g - 1)[0]
    if math.gcd(d if d else m, m) != 1:
        raise ValueError(f"unitary part generates index-{math.gcd(d if d else m, m)} "
                         f"subgroup of Z_{m}, not surjective")
    if d != 1:
        inv = pow(d, -1, m)
        w.do("twist_a", i=g - 1, n=inv)      # (d, 0) -> (d, 1)
        w.do("swap", i=g - 1)                # -> (1, -d)
        reduce_handle(g - 1)
    # distribute exponent 1 leftwards
    for j in range(g - 2, -1, -1):
        # right neighbour j+1 has (1, 0); move it to position j
        w.do("transpose", i=j)
        # a cross subtracts the left exponent (now 1) from the right one
        for _k in range((uv(j + 1)[0] - 1) % m):
            w.do("cross", i=j)
        reduce_handle(j + 1)
    for i in range(g):
        if uv(i) != (1 % m, 0):
            raise MoveSearchExhausted(f"alignment failed at handle {i}: {uv(i)}")
    assert w.rep.relator_holds(1e-7)
    return w.rep, w.log


# ---------------------------------------------------------------------------
# good handles for non-coaxial representations
# ---------------------------------------------------------------------------


def _good(A: MoebiusMap, B: MoebiusMap, tol: float) -> bool:
    return not commutator(A, B).is_identity(tol)


def good_handles_noncoaxial(rep: Representation,
                            tol: float = DEFAULT_TOL) -> Tuple[Representation, MoveLog]:
    """Make every handle's commutator non-trivial (affine, not co-axial).

    Two affine maps commute iff they have the same fixed-point set in C, so
    badness is a fixed-set coincidence; a cross move from a good handle
    breaks it.  Candidate moves are verified on the output and retried with
    a pre-twist of the bad handle when the coincidence reappears.
    """
    if not rep.all_affine(tol):
        raise CoaxialInput("expected an affine representation")
    g = rep.signature.genus
    rep2, log0 = ensure_nontrivial_handles(rep, tol)
    w = _Worker(rep2, log0)

    def handle_good(i):
        A, B = w.handle(i)
        return _good(A, B, tol)

    def fixsets_distinct() -> bool:
        vals = []
        for a, b in w.rep.handles:
            for x in (a, b):
                if not x.is_identity(tol):
                    vals.append(fixed_in_plane(x, tol))
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                x, y = vals[i], vals[j]
                if (x is None) != (y is None):
                    return True
                if x is not None and abs(x - y) > tol * (1 + abs(x) + abs(y)):
                    return True
        return False

    if not any(handle_good(i) for i in range(g)) and not fixsets_distinct():
        raise CoaxialInput("handle part is abelian: no good handle can exist")

    def try_cross(i_good: int, j_bad: int) -> bool:
        for n in range(0, 6):
            snap_rep, snap_log = w.rep, list(w.log)
            if n > 0:
                w.do("twist_a", i=j_bad, n=n)
            ii, jj = w.bring_adjacent(i_good, j_bad)
            w.do("cross", i=ii)
            if handle_good(ii) and handle_good(jj):
                return True
            w.rep, w.log = snap_rep, snap_log
        return False

    for _round in range(4 * g + 4):
        bad = [i for i in range(g) if not handle_good(i)]
        if not bad:
            break
        good = [i for i in range(g) if handle_good(i)]
        if good:
            if not try_cross(good[0], bad[0]):
                raise MoveSearchExhausted(f"could not make handle {bad[0]} good")
        else:
            found = False
            for i in range(g):
                for j in range(i + 1, g):
                    fi = fixed_in_plane(w.handle(i)[0], tol)
                    fj = fixed_in_plane(w.handle(j)[0], tol)
                    distinct = (fi is None) != (fj is None) or (
                        fi is not None and fj is not None
                        and abs(fi - fj) > tol * (1 + abs(fi) + abs(fj)))
                    if distinct and try_cross(i, j):
                        found = True
                        break
                if found:
                    break
            if not found:
                raise MoveSearchExhausted("no good handle reachable")
    if any(not handle_good(i) for i in range(g)):
        raise MoveSearchExhausted("good-handle normalization incomplete")
    assert w.rep.relator_holds(1e-7)
    return w.rep, w.log


# ---------------------------------------------------------------------------
# dihedral handle isolation
# ---------------------------------------------------------------------------


def _swaps_pair(mtx: MoebiusMap, tol: float) -> bool:
    """Does the map swap 0 and oo (it must preserve the pair)?"""
    scale = max(abs(x) for x in mtx.matrix())
    diag = abs(mtx.b) <= tol * scale and abs(mtx.c) <= tol * scale
    anti = abs(mtx.a) <= tol * scale and abs(mtx.d) <= tol * scale
    if diag == anti:
        raise NotDihedral("generator does not preserve the pair {0, oo}")
    return anti


def isolate_dihedral_handle(rep: Representation,
                            tol: float = DEFAULT_TOL) -> Tuple[Representation, MoveLog]:
    """Push all pair-swapping behaviour into handle 0.

    Output: handle 0 is dihedral (second generator swaps 0 and oo, first
    fixes them) and every other handle fixes 0 and oo pointwise.
    """
    g = rep.signature.genus
    swaps = [(_swaps_pair(a, tol), _swaps_pair(b, tol)) for a, b in rep.handles]
    for gg in rep.peripherals:
        if not gg.is_identity(tol) and _swaps_pair(gg, tol):
            raise NotDihedral("a peripheral swaps the invariant pair")
    if not any(x or y for x, y in swaps):
        raise NotDihedral("no handle generator swaps the pair: co-axial input")
    w = _Worker(rep)

    def parity(i):
        A, B = w.handle(i)
        return _swaps_pair(A, tol), _swaps_pair(B, tol)

    for i in range(g):
        pa, pb = parity(i)
        if pa and pb:
            w.do("twist_b", i=i, n=1)        # (AB, B): fixes, swaps
        elif pa and not pb:
            w.do("swap", i=i)                # (ABA^-1, A^-1): fixes, swaps
        assert not parity(i)[0]
    for _round in range(2 * g + 2):
        dih = [i for i in range(g) if parity(i)[1]]
        if len(dih) <= 1:
            break
        ii, jj = w.bring_adjacent(dih[0], dih[1])
        w.do("cross", i=ii)                  # ii turns co-axial, jj dihedral
        assert not any(parity(ii))
    dih = [i for i in range(g) if parity(i)[1]]
    assert len(dih) == 1
    d = dih[0]
    while d > 0:
        w.do("transpose", i=d - 1)
        d -= 1
    assert parity(0) == (False, True)
    assert all(not any(parity(i)) for i in range(1, g))
    assert w.rep.relator_holds(1e-7)
    return w.rep, w.log


# ---------------------------------------------------------------------------
# ordering commutators into a convex chain
# ---------------------------------------------------------------------------


@dataclass
class ConvexOrder:
    permutation: List[int]          # position p holds the old handle perm[p]
    vectors: List[complex]          # translation values in the new order
    degenerate: bool                # all vectors parallel


def order_commutators_convex(rep: Representation,
                             tol: float = DEFAULT_TOL) -> ConvexOrder:
    """Order handles so their commutator translations, in counter-clockwise
    argument order, traverse a (possibly degenerate) convex polygon."""
    t: List[complex] = []
    for i, (a, b) in enumerate(rep.handles):
        c = commutator(a, b)
        if c.is_identity(tol):
            raise NonTranslationCommutator(f"handle {i} commutator is trivial")
        if not c.is_affine(tol):
            raise NonTranslationCommutator(f"handle {i} commutator is not affine")
        lin, off = c.affine_parts(tol)
        if abs(lin - 1.0) > tol:
            raise NonTranslationCommutator(
                f"handle {i} commutator is not a translation")
        t.append(off)
    order = sorted(range(len(t)),
                   key=lambda i: (wrap_angle(cmath.phase(t[i])), abs(t[i])))
    vs = [t[i] for i in order]
    base = cmath.phase(vs[0]) if vs else 0.0
    degenerate = all(abs(math.sin(cmath.phase(v) - base)) <= 1e-12 for v in vs)
    return ConvexOrder(order, vs, degenerate)
