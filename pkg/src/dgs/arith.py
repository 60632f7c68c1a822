"""Odd-part factoring and budgeted square-free certification.

Certifying that a large integer is square-free is semidecidable in
practice, so the verdict is tri-state and carries its evidence: found
prime factors with exponents, the unfactored residual and its
classification, and the effort spent.  Everything is deterministic for a
fixed input and budget (fixed Brent-rho polynomial sequence, fixed
Miller-Rabin bases).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import gcd, isqrt, prod
from typing import Dict, List, Optional, Tuple

from .rng import mix64

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Below this bound the 12-base Miller-Rabin test is a proof, not a gamble.
_MR_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981
_MR_ROUNDS = 64  # 4^-64 = 2^-128 error bound for larger inputs

_sieve_primes: List[int] = []
_sieve_bound = 0
_block_cache: Dict[int, List[Tuple[List[int], int]]] = {}
_BLOCK = 4096


def primes_upto(n: int) -> List[int]:
    """Sieve of Eratosthenes with a growing module-level cache."""
    global _sieve_primes, _sieve_bound
    if n > _sieve_bound:
        size = max(n, 2 * _sieve_bound, 1 << 16)
        sieve = bytearray([1]) * (size + 1)
        sieve[0:2] = b"\x00\x00"
        for p in range(2, isqrt(size) + 1):
            if sieve[p]:
                sieve[p * p:: p] = bytearray(len(sieve[p * p:: p]))
        _sieve_primes = [i for i, f in enumerate(sieve) if f]
        _sieve_bound = size
    from bisect import bisect_right

    return _sieve_primes[: bisect_right(_sieve_primes, n)]


def _product_tree(xs: List[int]) -> int:
    while len(xs) > 1:
        xs = [xs[i] * xs[i + 1] for i in range(0, len(xs) - 1, 2)] + (
            [xs[-1]] if len(xs) % 2 else []
        )
    return xs[0] if xs else 1


def _prime_blocks(bound: int) -> List[Tuple[List[int], int]]:
    if bound not in _block_cache:
        ps = primes_upto(bound)
        blocks = []
        for i in range(0, len(ps), _BLOCK):
            chunk = ps[i : i + _BLOCK]
            blocks.append((chunk, _product_tree(list(chunk))))
        _block_cache[bound] = blocks
    return _block_cache[bound]


def is_probable_prime(n: int) -> bool:
    """Strong pseudoprime test; deterministic below ~3.3e24, otherwise 64
    rounds with bases derived from the input (error < 2^-128)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s

    def witness(a: int) -> bool:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            return False
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                return False
        return True

    if n < _MR_DETERMINISTIC_BOUND:
        bases = _SMALL_PRIMES
    else:
        bases = tuple(
            2 + mix64((n & 0xFFFFFFFFFFFFFFFF) ^ (i * 0x9E3779B97F4A7C15)) % (n - 3)
            for i in range(_MR_ROUNDS)
        )
    return not any(witness(a) for a in bases)


def iroot(x: int, k: int) -> int:
    """Floor of the k-th root."""
    if x < 0 or k < 1:
        raise ValueError("iroot needs x >= 0, k >= 1")
    if x == 0 or k == 1:
        return x
    if k == 2:
        return isqrt(x)
    r = 1 << -(-x.bit_length() // k)
    while True:
        nr = ((k - 1) * r + x // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    while r ** k > x:
        r -= 1
    return r


def is_perfect_power(x: int) -> Optional[Tuple[int, int]]:
    """Maximal representation x = base**exp with exp >= 2, else None."""
    if x < 2:
        return None
    for p in primes_upto(x.bit_length()):
        r = iroot(x, p)
        if r ** p == x:
            deeper = is_perfect_power(r)
            if deeper:
                return (deeper[0], deeper[1] * p)
            return (r, p)
    return None


def _brent_rho(n: int, c: int, max_iters: int) -> Tuple[Optional[int], int]:
    """Brent's cycle variant of Pollard rho with f(x) = x^2 + c.

    Returns (factor or None, iterations used).  Deterministic.
    """
    if n % 2 == 0:
        return 2, 0
    y, r, q = 2, 1, 1
    g = 1
    used = 0
    x = ys = y
    m = 128
    while g == 1 and used < max_iters:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1 and used < max_iters:
            ys = y
            steps = min(m, r - k, max_iters - used)
            for _ in range(steps):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            used += steps
            g = gcd(q, n)
            k += steps
        r <<= 1
    if g == n or g == 1:
        # backtrack one step at a time from the saved point
        g = 1
        while g == 1 and used < max_iters:
            ys = (ys * ys + c) % n
            used += 1
            g = gcd(abs(x - ys), n)
    if 1 < g < n:
        return g, used
    return None, used


@dataclass
class FactorBudget:
    """Work limits for the factoring pipeline."""

    trial_bound: int = 1_000_000
    rho_iterations: int = 400_000

    def __post_init__(self):
        if self.trial_bound < 2 or self.rho_iterations < 0:
            raise ValueError("budgets must be positive")


DEFAULT_BUDGET = FactorBudget()


class SquarefreeStatus(Enum):
    SQUARE_FREE = "SquareFree"
    NOT_SQUARE_FREE = "NotSquareFree"
    UNKNOWN = "Unknown"


class ResidualClass(Enum):
    ONE = "One"
    PROBABLE_PRIME = "ProbablePrime"
    COMPOSITE = "Composite"
    UNKNOWN = "Unknown"


@dataclass
class Effort:
    trial_bound: int = 0
    rho_iterations_used: int = 0
    mr_tests: int = 0


@dataclass
class SquarefreeCertificate:
    """Evidence-bearing verdict on square-freeness of an odd integer.

    residual holds whatever the pipeline did not reduce to named primes; its
    coprime pieces are listed in residual_pieces with their classification:
    'probable_prime', 'two_prime' (a composite below residual_factor_floor
    cubed, hence a product of exactly two distinct primes, every prime
    factor of the residual being larger than that floor), or
    'composite_unknown'.  Status SquareFree therefore tolerates a composite
    residual exactly when every piece is a certified two_prime or a
    probable prime.
    """

    value: int
    status: SquarefreeStatus
    found_factors: Tuple[Tuple[int, int], ...]
    residual: int
    residual_class: ResidualClass
    repeated_prime: Optional[int]
    effort: Effort
    residual_factor_floor: Optional[int] = None
    residual_pieces: Tuple[Tuple[int, str], ...] = ()

    def reassembles(self) -> bool:
        return prod(p ** e for p, e in self.found_factors) * self.residual == self.value


class _Work:
    __slots__ = ("budget", "effort")

    def __init__(self, budget: FactorBudget):
        self.budget = budget
        self.effort = Effort(trial_bound=budget.trial_bound)

    def mr(self, x: int) -> bool:
        self.effort.mr_tests += 1
        return is_probable_prime(x)

    def rho_left(self) -> int:
        return self.budget.rho_iterations - self.effort.rho_iterations_used


def _trial_divide(b: int, work: _Work, early_square: bool) -> Tuple[Dict[int, int], int, Optional[int]]:
    """Strip primes <= trial_bound from b.  Returns (factors, residual,
    early repeated prime or None).  Small inputs use a direct prime loop,
    large ones gcd against cached prime-block products."""
    bound = work.budget.trial_bound
    factors: Dict[int, int] = {}
    residual = b

    def pull(p: int) -> Optional[int]:
        nonlocal residual
        e = 0
        while residual % p == 0:
            residual //= p
            e += 1
        if e:
            factors[p] = e
            if early_square and e >= 2:
                return p
        return None

    if b.bit_length() <= 48:
        for p in primes_upto(min(bound, isqrt(b) + 1)):
            if p * p > residual:
                break
            rep = pull(p)
            if rep is not None:
                return factors, residual, rep
        if 1 < residual <= bound:
            factors[residual] = factors.get(residual, 0) + 1
            residual = 1
        return factors, residual, None

    for chunk, product in _prime_blocks(bound):
        if residual == 1:
            break
        if chunk[0] ** 2 > residual:
            break
        g = gcd(residual, product)
        if g == 1:
            continue
        for p in chunk:
            if g % p == 0:
                rep = pull(p)
                if rep is not None:
                    return factors, residual, rep
                if residual == 1:
                    break
    if 1 < residual <= bound:
        factors[residual] = factors.get(residual, 0) + 1
        residual = 1
    return factors, residual, None


def certify_squarefree(b: int, budget: Optional[FactorBudget] = None) -> SquarefreeCertificate:
    """Decide whether odd b >= 1 is square-free, within the given budget.

    Pipeline: trial division, then perfect-power detection, strong
    pseudoprime classification and Brent-rho splitting of what remains.
    Status is Unknown only when the budget runs out on a composite piece.
    """
    if b < 1 or b % 2 == 0:
        raise ValueError("input must be an odd positive integer")
    budget = budget or DEFAULT_BUDGET
    work = _Work(budget)

    if b == 1:
        return SquarefreeCertificate(
            b, SquarefreeStatus.SQUARE_FREE, (), 1, ResidualClass.ONE, None,
            work.effort,
        )

    factors, residual, early = _trial_divide(b, work, early_square=True)
    if early is not None:
        if residual == 1:
            rc = ResidualClass.ONE
        elif work.mr(residual):
            rc = ResidualClass.PROBABLE_PRIME
        else:
            rc = ResidualClass.COMPOSITE
        return SquarefreeCertificate(
            b, SquarefreeStatus.NOT_SQUARE_FREE, _sorted_factors(factors),
            residual, rc, early, work.effort,
        )

    floor = budget.trial_bound  # every prime factor of the residual exceeds it
    probable: Dict[int, int] = {}
    two_prime: List[Tuple[int, int]] = []
    stuck: List[Tuple[int, int]] = []
    queue: List[Tuple[int, int]] = [(residual, 1)] if residual > 1 else []

    def process_queue() -> None:
        while queue:
            x, mult = queue.pop()
            if x < floor * floor:
                # proven prime: any factorization would need a factor <= floor
                factors[x] = factors.get(x, 0) + mult
                continue
            if work.mr(x):
                probable[x] = probable.get(x, 0) + mult
                continue
            power = is_perfect_power(x)
            if power:
                queue.append((power[0], mult * power[1]))
                continue
            if mult == 1 and x < floor ** 3:
                # composite, not a power, all factors > floor, below floor^3:
                # exactly two distinct primes, hence square-free as it stands
                two_prime.append((x, mult))
                continue
            split = None
            c = 1
            while split is None and work.rho_left() > 0:
                split, used = _brent_rho(x, c, work.rho_left())
                work.effort.rho_iterations_used += used
                c += 1
                if split is not None and not (1 < split < x):
                    split = None
            if split is None:
                stuck.append((x, mult))
            else:
                queue.append((split, mult))
                queue.append((x // split, mult))

    def refine_coprime() -> bool:
        """Split entries sharing a prime and requeue the parts, so the final
        factors and pieces are pairwise coprime and exponent counting is
        sound.  Found primes above the floor take part too: rho may have
        peeled one copy of a prime whose second copy hides in a piece."""
        pieces = ([(x, m, "2p") for x, m in two_prime]
                  + [(x, m, "st") for x, m in stuck]
                  + [(p, m, "pp") for p, m in probable.items()]
                  + [(p, m, "fp") for p, m in factors.items() if p > floor])
        prime_kinds = ("pp", "fp")
        for i in range(len(pieces)):
            for j in range(i + 1, len(pieces)):
                a, ma, ka = pieces[i]
                c, mc, kc = pieces[j]
                if ka in prime_kinds and kc in prime_kinds:
                    continue
                g = gcd(a, c)
                if g == 1:
                    continue
                for x, _m, kind in (pieces[i], pieces[j]):
                    if kind == "2p":
                        two_prime.remove((x, _m))
                    elif kind == "st":
                        stuck.remove((x, _m))
                    elif kind == "pp":
                        del probable[x]
                    else:
                        del factors[x]
                if g == a == c:
                    queue.append((a, ma + mc))  # identical entries: merge
                else:
                    for part, m in ((g, ma + mc), (a // g, ma), (c // g, mc)):
                        if part > 1:
                            queue.append((part, m))
                return True
        return False

    process_queue()
    while refine_coprime():
        process_queue()

    repeated = None
    for p in sorted(factors):
        if factors[p] >= 2:
            repeated = p
            break
    if repeated is None:
        for p in sorted(probable):
            if probable[p] >= 2:
                repeated = p
                break

    def leftover_pieces() -> List[Tuple[int, int, str]]:
        return ([(x, m, "two_prime") for x, m in sorted(two_prime)]
                + [(x, m, "composite_unknown") for x, m in sorted(stuck)])

    if repeated is not None:
        merged = dict(factors)
        for p, e in probable.items():
            merged[p] = merged.get(p, 0) + e
        rest = leftover_pieces()
        res = prod(x ** m for x, m, _ in rest) if rest else 1
        if res == 1:
            rc = ResidualClass.ONE
        else:
            rc = ResidualClass.COMPOSITE
        return SquarefreeCertificate(
            b, SquarefreeStatus.NOT_SQUARE_FREE, _sorted_factors(merged),
            res, rc, repeated, work.effort,
            floor if res > 1 else None,
            tuple((x, k) for x, _m, k in rest),
        )

    if stuck:
        merged = dict(factors)
        for p, e in probable.items():
            merged[p] = merged.get(p, 0) + e
        rest = leftover_pieces()
        res = prod(x ** m for x, m, _ in rest)
        return SquarefreeCertificate(
            b, SquarefreeStatus.UNKNOWN, _sorted_factors(merged),
            res, ResidualClass.COMPOSITE, None, work.effort,
            floor, tuple((x, k) for x, _m, k in rest),
        )

    # square-free: pieces are pairwise coprime, every exponent is one, and
    # each two_prime piece contributes two distinct primes above the floor
    if not two_prime and len(probable) == 1:
        (p, e), = probable.items()
        if e == 1:
            return SquarefreeCertificate(
                b, SquarefreeStatus.SQUARE_FREE, _sorted_factors(factors),
                p, ResidualClass.PROBABLE_PRIME, None, work.effort,
                floor, ((p, "probable_prime"),),
            )
    merged = dict(factors)
    for p, e in probable.items():
        merged[p] = merged.get(p, 0) + e
    if two_prime:
        rest = leftover_pieces()
        res = prod(x ** m for x, m, _ in rest)
        return SquarefreeCertificate(
            b, SquarefreeStatus.SQUARE_FREE, _sorted_factors(merged),
            res, ResidualClass.COMPOSITE, None, work.effort,
            floor, tuple((x, k) for x, _m, k in rest),
        )
    return SquarefreeCertificate(
        b, SquarefreeStatus.SQUARE_FREE, _sorted_factors(merged),
        1, ResidualClass.ONE, None, work.effort, None, (),
    )


def _sorted_factors(d: Dict[int, int]) -> Tuple[Tuple[int, int], ...]:
    return tuple(sorted(d.items()))


def factor_within_budget(x: int, budget: Optional[FactorBudget] = None) -> Tuple[Dict[int, int], int]:
    """Best-effort factorization of x >= 1 (any parity): (factors, residual)."""
    if x < 1:
        raise ValueError("input must be positive")
    budget = budget or DEFAULT_BUDGET
    factors: Dict[int, int] = {}
    e2 = 0
    while x % 2 == 0:
        x //= 2
        e2 += 1
    if e2:
        factors[2] = e2
    if x == 1:
        return factors, 1
    cert = certify_squarefree(x, budget)
    for p, e in cert.found_factors:
        factors[p] = factors.get(p, 0) + e
    residual = cert.residual
    if residual > 1 and cert.residual_class is ResidualClass.PROBABLE_PRIME:
        factors[residual] = factors.get(residual, 0) + 1
        residual = 1
    elif residual > 1 and cert.status is SquarefreeStatus.NOT_SQUARE_FREE:
        # the square-free check aborts early on a repeated prime; keep going
        sub, rem = factor_within_budget(residual, budget)
        for p, e in sub.items():
            factors[p] = factors.get(p, 0) + e
        residual = rem
    return factors, residual
