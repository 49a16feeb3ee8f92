#!/usr/bin/env python3
"""Generate the bundled test fixtures (deterministic; output is committed).

corpus/      chain problems buried under decoy axioms, plus a manifest
soundness/   small function-free problems for the ground truth-table oracle
skewed/      chains hidden among look-alike distractor chains (few positives)
"""

import argparse
import random
from pathlib import Path

CONSTANTS = ["a", "b", "c", "d"]


def decoys(rng, n_facts):
    """Short clauses over d/e predicates that saturate into many cheap units."""
    out = []
    consts = CONSTANTS[:]
    rng.shuffle(consts)
    for k in range(n_facts):
        out.append(f"d{k % 3 + 1}({consts[k % len(consts)]})")
    out += [
        "~d1(X) | d2(X)",
        "~d2(X) | d3(X)",
        "~d3(X) | ~d1(Y) | e(X,Y)",
        "~e(X,Y) | e(Y,X)",
        "~e(X,Y) | ~e(Y,Z) | e(X,Z)",
        "~e(X,X) | d4(h(X))",
        "~d4(X) | d5(X,X)",
    ]
    return out


def chain(rng, idx, length):
    preds = rng.sample([f"p{k}" for k in range(1, 10)], length + 1)
    sk = f"esk{idx}"
    lines = [f"{preds[0]}(f({sk}),g({sk},a))"]
    for j in range(length):
        src, dst = preds[j], preds[j + 1]
        if j % 2 == 0:
            lines.append(f"~{src}(f(X),Y) | {dst}(X,Y)")
        else:
            lines.append(f"~{src}(X,g(Y,Z)) | {dst}(f(X),g(Y,Z))")
    last = preds[-1]
    # the goal must match what the chain derives
    t = f"f({sk})"
    for j in range(length):
        t = t[2:-1] if j % 2 == 0 else f"f({t})"
    goal = f"~{last}({t},g({sk},a))"
    return lines, goal


def noise(rng, n):
    out = []
    for _ in range(n):
        a, b = rng.sample([f"p{k}" for k in range(1, 10)], 2)
        out.append(f"~{a}(X,h(Y)) | {b}(h(X),Y)")
    return out


def write_problem(path, clauses, goal):
    with path.open("w") as f:
        f.write(f"% {path.stem}\n")
        for i, c in enumerate(clauses):
            f.write(f"cnf(ax{i}, axiom, ({c})).\n")
        f.write(f"cnf(goal, negated_conjecture, ({goal})).\n")


def gen_corpus(root, rng, count, hard):
    root.mkdir(parents=True, exist_ok=True)
    names = []
    for i in range(count + hard):
        is_hard = i >= count
        length = rng.randint(5, 7) if is_hard else rng.randint(2, 4)
        lines, goal = chain(rng, i, length)
        facts = rng.randint(6, 9) if is_hard else rng.randint(3, 6)
        axioms = lines + decoys(rng, facts) + noise(rng, rng.randint(0, 2))
        rng.shuffle(axioms)
        name = f"{'hard' if is_hard else 'chain'}{i:02d}"
        write_problem(root / f"{name}.p", axioms, goal)
        names.append(name)
    with (root / "manifest.txt").open("w") as f:
        f.write("# problem-id path\n")
        for n in names:
            f.write(f"{n} {n}.p\n")


def distractors(rng, idx, n):
    """Chain-shaped rules and facts that never reach the goal."""
    out = []
    for k in range(n):
        a, b = rng.sample([f"q{j}" for j in range(1, 7)] + [f"p{j}" for j in range(1, 10)], 2)
        if rng.random() < 0.5:
            out.append(f"~{a}(f(X),Y) | {b}(X,Y)")
        else:
            out.append(f"~{a}(X,g(Y,Z)) | {b}(f(X),g(Y,Z))")
    for k in range(n // 2):
        q = f"q{rng.randint(1, 6)}"
        out.append(f"{q}(f(esk{idx}),g(esk{k % 5},{rng.choice(CONSTANTS)}))")
    return out


def gen_skewed(root, rng, count):
    root.mkdir(parents=True, exist_ok=True)
    names = []
    for i in range(count):
        lines, goal = chain(rng, 100 + i, rng.randint(2, 3))
        axioms = lines + distractors(rng, 100 + i, rng.randint(24, 32)) + decoys(rng, rng.randint(4, 7))
        rng.shuffle(axioms)
        name = f"skewed{i:02d}"
        write_problem(root / f"{name}.p", axioms, goal)
        names.append(name)
    with (root / "manifest.txt").open("w") as f:
        for n in names:
            f.write(f"{n} {n}.p\n")


def gen_soundness(root, rng, count):
    """Unary/binary predicates over two constants: at most 12 ground atoms."""
    root.mkdir(parents=True, exist_ok=True)
    consts = ["a", "b"]
    unary = ["p", "q"]
    binary = ["r", "s"]
    atoms_vars = ["X", "Y"]

    def atom():
        if rng.random() < 0.5:
            return f"{rng.choice(unary)}({rng.choice(consts + atoms_vars)})"
        return f"{rng.choice(binary)}({rng.choice(consts + atoms_vars)},{rng.choice(consts + atoms_vars)})"

    names = []
    for i in range(count):
        clauses = []
        for _ in range(rng.randint(4, 7)):
            lits = [("~" if rng.random() < 0.5 else "") + atom() for _ in range(rng.randint(1, 3))]
            clauses.append(" | ".join(lits))
        name = f"ground{i:02d}"
        path = root / f"{name}.p"
        with path.open("w") as f:
            for k, c in enumerate(clauses):
                f.write(f"cnf(s{k}, axiom, ({c})).\n")
        names.append(name)
    with (root / "pigeon.p").open("w") as f:
        f.write("% two pigeons, one hole\n")
        f.write("cnf(p1, axiom, (in1)).\n")
        f.write("cnf(p2, axiom, (in2)).\n")
        f.write("cnf(x, axiom, (~in1 | ~in2)).\n")
        f.write("cnf(t1, axiom, (~in1 | h1)).\n")
        f.write("cnf(t2, axiom, (~in2 | h2)).\n")
        f.write("cnf(t3, axiom, (~h1 | ~h2 | in1)).\n")
    names.append("pigeon")
    with (root / "manifest.txt").open("w") as f:
        for n in names:
            f.write(f"{n}.p\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "tests" / "fixtures")
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--problems", type=int, default=24)
    ap.add_argument("--hard", type=int, default=4)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    gen_corpus(args.out / "corpus", rng, args.problems, args.hard)
    gen_soundness(args.out / "soundness", rng, 16)
    gen_skewed(args.out / "skewed", rng, 12)


if __name__ == "__main__":
    main()
