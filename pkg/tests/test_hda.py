import itertools
from pathlib import Path

import pytest

from conftest import n_shape, par, word
from oracles import oracle_reachability

from hdalib.errors import FaceTypingError, IdentityViolation
from hdalib.formats import parse_hda, parse_ipomset_text
from hdalib.hda import (
    DOWN,
    LOWER,
    UP,
    UPPER,
    Cell,
    Path as HdaPath,
    PathStep,
    accepting_paths,
    build_hda,
    check_path,
    composite_face,
    enumerate_language,
    ess_closure,
    essential_report,
    ev_of_path,
    is_deterministic,
    member,
    sparse_normalize,
    validate,
)
from hdalib.ipomset import (
    canonicalize,
    down_close,
    glue,
    identity,
    sparse_decomposition,
)

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="module")
def chain():
    return parse_hda((DATA / "chain3squares.hda").read_text())


@pytest.fixture(scope="module")
def loop():
    return parse_hda((DATA / "loop_ab.hda").read_text())


def up(*positions):
    return PathStep(UP, frozenset(positions))


def down(*positions):
    return PathStep(DOWN, frozenset(positions))


class TestValidate:
    def test_square_valid(self, square):
        assert validate(square).ok

    def test_empty_valid(self):
        assert validate(build_hda([], [], [])).ok

    def test_missing_face_entry(self):
        x = build_hda([Cell("v", ()), Cell("e", ("a",), ("v",), ())], ["v"], ["v"])
        rep = validate(x)
        assert not rep.ok
        with pytest.raises(FaceTypingError):
            validate(x, strict=True)

    def test_wrong_loset_type(self):
        x = build_hda(
            [Cell("v", ()), Cell("b1", ("b",), ("v",), ("v",)),
             Cell("e", ("a",), ("b1",), ("v",))],
            ["v"], ["v"],
        )
        assert not validate(x).ok

    def test_identity_violation(self, square):
        # reroute one square corner so the two singleton routes disagree
        cells = dict(square.cells)
        cells["g"] = Cell("g", ("b",), ("v",), ("w",))  # δ¹_b(g) now w, not x
        broken = build_hda(cells.values(), square.start, square.accept)
        rep = validate(broken)
        assert not rep.ok
        with pytest.raises(IdentityViolation):
            validate(broken, strict=True)


class TestCompositeFaces:
    def test_square_corners(self, square):
        assert composite_face(square, "q", LOWER, [0, 1]) == "v"
        assert composite_face(square, "q", UPPER, [0, 1]) == "y"

    def test_empty_positions(self, square):
        assert composite_face(square, "x", UPPER, []) == "x"

    def test_out_of_range(self, square):
        with pytest.raises(FaceTypingError):
            composite_face(square, "q", LOWER, [5])

    def test_order_independence(self, square):
        a = composite_face(
            square, composite_face(square, "q", LOWER, [1]), LOWER, [0]
        )
        b = composite_face(
            square, composite_face(square, "q", LOWER, [0]), LOWER, [0]
        )
        assert a == b == "v"


class TestPathsAndEv:
    def test_square_filled_path(self, square):
        p = HdaPath(cells=("v", "q", "y"), steps=(up(0, 1), down(0, 1)))
        check_path(square, p)
        assert ev_of_path(square, p) == par(("a", 0, 0), ("b", 0, 0))

    def test_interleaving_with_open_tail(self, square):
        p = HdaPath(
            cells=("v", "e", "w", "h"), steps=(up(0), down(0), up(0))
        )
        check_path(square, p)
        assert ev_of_path(square, p) == word("ab", tgt=[1])

    def test_trivial_path_is_identity(self, square):
        p = HdaPath(cells=("h",), steps=())
        assert ev_of_path(square, p) == identity(("b",))

    def test_bad_path_rejected(self, square):
        p = HdaPath(cells=("v", "f"), steps=(up(0),))
        with pytest.raises(FaceTypingError):
            check_path(square, p)

    def test_merge_two_upsteps(self, square):
        p = HdaPath(cells=("v", "e", "q"), steps=(up(0), up(1)))
        n = sparse_normalize(square, p)
        assert n == HdaPath(cells=("v", "q"), steps=(up(0, 1),))
        assert ev_of_path(square, p) == ev_of_path(square, n)

    def test_merge_two_downsteps(self, square):
        p = HdaPath(cells=("q", "f", "y"), steps=(down(1), down(0)))
        n = sparse_normalize(square, p)
        assert n == HdaPath(cells=("q", "y"), steps=(down(0, 1),))
        assert ev_of_path(square, p) == ev_of_path(square, n)

    def test_sparse_paths_are_fixed_points(self, square):
        for p in accepting_paths(square, 8):
            assert sparse_normalize(square, p) == p

    def test_empty_steps_dropped(self, square):
        p = HdaPath(cells=("v", "v", "e"), steps=(up(), up(0)))
        n = sparse_normalize(square, p)
        assert n == HdaPath(cells=("v", "e"), steps=(up(0),))

    def test_segment_evs_form_sparse_decomposition(self, square):
        for p in accepting_paths(square, 8):
            whole = ev_of_path(square, p)
            seq = sparse_decomposition(whole)
            segments = []
            for k, st in enumerate(p.steps):
                big = square.cells[p.cells[k + 1 if st.kind == UP else k]]
                segments.append((st.kind == UP, big.ev, st.positions))
            expect = [
                (s.kind == "starter", s.loset, s.active) for s in seq.steps
            ]
            assert segments == expect


class TestEssential:
    def test_square_everything_essential(self, square):
        rep = essential_report(square)
        assert rep.essential == frozenset(square.cells)

    def test_matches_reachability_oracle(self, square, chain, loop):
        for x in (square, chain, loop):
            fwd, bwd = oracle_reachability(x)
            rep = essential_report(x)
            assert rep.accessible == fwd
            assert rep.coaccessible == bwd
            assert rep.essential == fwd & bwd

    def test_chain_bottom_row_inaccessible(self, chain):
        rep = essential_report(chain)
        for name in ("p00", "p20", "p40", "ea0", "ec0"):
            assert name not in rep.accessible

    def test_no_accept_means_nothing_essential(self, square):
        x = build_hda(square.cells.values(), square.start, [])
        assert essential_report(x).essential == frozenset()

    def test_closure_is_valid_sub_hda(self, chain):
        sub = ess_closure(chain)
        assert validate(sub).ok
        assert essential_report(chain).essential <= frozenset(sub.cells)

    def test_closure_preserves_language(self, chain):
        assert enumerate_language(ess_closure(chain), 10) == enumerate_language(
            chain, 10
        )


class TestMember:
    def test_interleaving_witness(self, square):
        ba = word("ba")
        path = member(square, ba)
        assert path == HdaPath(
            cells=("v", "g", "x", "f", "y"), steps=(up(0), down(0), up(0), down(0))
        )
        assert ev_of_path(square, path) == ba

    def test_open_tail_rejected(self, square):
        assert member(square, word("ba", tgt=[1])) is None

    def test_foreign_label_rejected(self, square):
        assert member(square, word("c")) is None

    def test_all_language_members_accepted(self, square):
        for p in enumerate_language(square, 8):
            w = member(square, p)
            assert w is not None
            assert ev_of_path(square, w) == p

    def test_witness_split_along_divisions(self, square):
        # a path for a glued ipomset splits into paths for the two parts
        from hdalib.ipomset import enumerate_divisions

        for m in enumerate_language(square, 8):
            whole = member(square, m)
            for p, q in enumerate_divisions(m):
                first = member(square, p, targets=square.cells)
                assert first is not None
                rest = member(
                    square, q, sources=[first.target], targets=square.accept
                )
                assert rest is not None


class TestEnumerateLanguage:
    def test_square_language(self, square):
        got = enumerate_language(square, 8)
        expect = {
            par(("a", 0, 0), ("b", 0, 1)),
            word("ab", tgt=[1]),
            par(("a", 0, 0), ("b", 0, 0)),
            word("ab"),
            word("ba"),
        }
        assert got == frozenset(expect)

    def test_square_has_five_sparse_paths(self, square):
        paths = accepting_paths(square, 8)
        assert len(paths) == 5
        expect = {
            HdaPath(("v", "e", "w", "h"), (up(0), down(0), up(0))),
            HdaPath(("v", "e", "w", "h", "y"), (up(0), down(0), up(0), down(0))),
            HdaPath(("v", "q", "h"), (up(0, 1), down(0))),
            HdaPath(("v", "q", "y"), (up(0, 1), down(0, 1))),
            HdaPath(("v", "g", "x", "f", "y"), (up(0), down(0), up(0), down(0))),
        }
        assert set(paths) == expect

    def test_chain_language_is_down_closure(self, chain):
        got = enumerate_language(chain, 10)
        assert got == down_close([n_shape()])

    def test_language_is_down_closed(self, square, chain):
        for x in (square, chain):
            lang = enumerate_language(x, 10)
            assert down_close(lang) == lang

    def test_loop_bounded_members(self, loop):
        one = canonicalize(
            "aab", source=[0], target=[1], prec=[(0, 1)], evord=[(0, 2), (1, 2)]
        )
        dot_a = canonicalize("a", source=[0], target=[0])
        lang = enumerate_language(loop, 8)
        assert dot_a in lang
        assert one in lang
        assert glue(one, one) in enumerate_language(loop, 10)


class TestDeterminism:
    def test_square_deterministic(self, square):
        rep = is_deterministic(square)
        assert rep.deterministic
        # brute check over essential cells
        ess = essential_report(square).essential
        seen = {}
        for name in ess:
            c = square.cells[name]
            for r in range(1, c.dim + 1):
                for combo in itertools.combinations(range(c.dim), r):
                    base = composite_face(square, name, LOWER, combo)
                    if base in ess:
                        key = (base, c.ev, combo)
                        assert key not in seen, (seen[key], name)
                        seen[key] = name

    def test_two_start_cells_same_type(self, square):
        x = build_hda(square.cells.values(), ["v", "w"], square.accept)
        rep = is_deterministic(x)
        assert not rep.deterministic
        assert rep.start_clashes == ((),)

    def test_parallel_edges_detected(self):
        x = build_hda(
            [
                Cell("s", ()),
                Cell("t", ()),
                Cell("e1", ("a",), ("s",), ("t",)),
                Cell("e2", ("a",), ("s",), ("t",)),
            ],
            ["s"],
            ["t"],
        )
        rep = is_deterministic(x)
        assert not rep.deterministic
        assert rep.branch_clashes == (("s", (0,), "e1", "e2"),)

    def test_inessential_branch_tolerated(self):
        # e2 dangles: not coaccessible, so no clash is reported
        x = build_hda(
            [
                Cell("s", ()),
                Cell("t", ()),
                Cell("u", ()),
                Cell("e1", ("a",), ("s",), ("t",)),
                Cell("e2", ("a",), ("s",), ("u",)),
            ],
            ["s"],
            ["t"],
        )
        assert is_deterministic(x).deterministic

    def test_loop_witness_targets_agree(self, loop):
        # deterministic HDA: witness paths with equal ev share their target
        assert is_deterministic(loop).deterministic
        one = canonicalize(
            "aab", source=[0], target=[1], prec=[(0, 1)], evord=[(0, 2), (1, 2)]
        )
        w1 = member(loop, one)
        w2 = member(loop, glue(one, one))
        assert w1.target == w2.target
