#!/usr/bin/env python3
"""Generate the small synthetic dataset under data/mini.

Eight developers own overlapping components of a fictional note-taking app.
Bug reports draw words from their component's vocabulary, get fixed by the
owner most of the time, and are linked to commits through "Fixes #N"
messages or a quoted sha prefix. A handful of open, non-bug and unlinked
issues exercise the experiment filter.

Output is fully determined by --seed.
"""

import argparse
import hashlib
import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

DEVELOPERS = ["alice", "bob", "carol", "dave", "erin", "frank", "grace", "heidi"]

# component -> (owners, vocabulary)
COMPONENTS = {
    "editor": (["alice", "bob"], "cursor selection undo redo paste clipboard caret keystroke typing buffer"),
    "sync": (["carol", "alice"], "sync conflict merge offline upload download server token retry network"),
    "render": (["dave", "erin"], "markdown table image preview html render font layout scroll theme"),
    "search": (["erin", "frank"], "search query index result highlight filter tag ranking fuzzy match"),
    "storage": (["frank", "grace"], "database migration schema corrupt backup restore disk quota sqlite file"),
    "auth": (["heidi", "carol"], "login password session logout oauth expire account permission signup cookie"),
}
FILES_PER_COMPONENT = 5
GENERIC = "app crash error fails broken wrong after click open close window button save load version update".split()
SYMPTOMS = [
    "crashes when", "fails to", "shows wrong", "freezes during", "loses data on", "is slow when",
    "throws exception in", "does not update after",
]


def iso(t):
    return t.strftime("%Y-%m-%dT%H:%M:%SZ")


def make_code(rng):
    files = []
    owners = {}
    for comp, (devs, vocab) in COMPONENTS.items():
        words = vocab.split()
        for i in range(FILES_PER_COMPONENT):
            path = f"src/{comp}/{comp}_{words[i]}.cpp"
            body = []
            for _ in range(12):
                a, b = rng.sample(words, 2)
                body.append(f"void {a}_{b}() {{ handle_{a}({b}); }}  // {a} {b} {comp}")
            files.append({"path": path, "content": "\n".join(body)})
            owners[path] = (comp, devs)
    return files, owners


def report_text(rng, comp, words):
    picked = rng.sample(words, 3)
    title = f"{picked[0].capitalize()} {rng.choice(SYMPTOMS)} {picked[1]}"
    desc_words = rng.sample(words, 4) + rng.sample(GENERIC, 3)
    rng.shuffle(desc_words)
    description = f"Steps: open the {comp} view, {' '.join(desc_words)}. Expected {picked[2]} to work."
    return title, description


def generate(seed):
    rng = random.Random(seed)
    code, owners = make_code(rng)
    files_of = {c: [f["path"] for f in code if owners[f["path"]][0] == c] for c in COMPONENTS}

    # Skewed activity so the most frequent fixers dominate early history.
    weight = {"alice": 6, "bob": 2, "carol": 4, "dave": 3, "erin": 3, "frank": 2, "grace": 1, "heidi": 2}
    comp_weights = [sum(weight[d] for d in devs) for devs, _ in COMPONENTS.values()]

    t = datetime(2023, 1, 2, 9, 0, tzinfo=timezone.utc)
    reports, commits = [], []
    past = []  # (title, description, fixer) of earlier fixed bugs
    next_id = 1

    def new_commit(fixer, when, message, comp):
        sha = hashlib.sha1(f"{seed}-{len(commits)}-{message}".encode()).hexdigest()
        author = fixer
        if fixer == "bob" and rng.random() < 0.5:
            author = "Bob Stone <bob@users.example.org>"
        committer = "alice" if rng.random() < 0.15 else author
        changed = rng.sample(files_of[comp], rng.randint(1, 2))
        commits.append({"sha": sha, "author": author, "committer": committer,
                        "timestamp": iso(when), "message": message, "files": changed})
        return sha

    for _ in range(120):
        t += timedelta(hours=rng.randint(20, 70), minutes=rng.randint(0, 59))
        rid = str(next_id)
        next_id += 1
        kind = rng.random()
        comp = rng.choices(list(COMPONENTS), weights=comp_weights)[0]
        devs, vocab = COMPONENTS[comp]
        words = vocab.split()

        if past and rng.random() < 0.2:
            # Near-duplicate of an earlier report: same text, same fixer.
            title, description, fixer = rng.choice(past)
            title = title + " again"
        else:
            title, description = report_text(rng, comp, words)
            r = rng.random()
            fixer = devs[0] if r < 0.6 else devs[1] if r < 0.85 else rng.choices(
                DEVELOPERS, weights=[weight[d] for d in DEVELOPERS])[0]

        created = t
        closed = created + timedelta(hours=rng.randint(4, 96))
        labels = ["bug"]
        status = "closed"
        link = "keyword"
        if kind < 0.06:
            status, closed = "open", None
        elif kind < 0.12:
            labels = ["enhancement"]
        elif kind < 0.15:
            link = "none"
        elif kind < 0.25:
            link = "sha"
        if rng.random() < 0.3:
            labels.append(rng.choice(["ui", "regression", "p1"]))
        if rng.random() < 0.2:
            labels = [l.capitalize() if l == "bug" else l for l in labels]
        assignees = [fixer] if rng.random() < 0.5 else []

        if status == "closed" and link != "none":
            fixed_at = created + timedelta(hours=rng.randint(1, 3))
            if link == "keyword":
                verb = rng.choice(["Fixes", "fixed", "Closes", "resolves", "Fix"])
                new_commit(fixer, fixed_at, f"{verb} #{rid}: {title.lower()}", comp)
            else:
                sha = new_commit(fixer, fixed_at, f"Handle {words[0]} edge case", comp)
                description += f" Fixed by commit {sha[:9]}."
            if rng.random() < 0.15:
                helper = rng.choice([d for d in DEVELOPERS if d != fixer])
                new_commit(helper, fixed_at + timedelta(minutes=30), f"Also fixes #{rid}", comp)
            if "bug" in [l.lower() for l in labels]:
                past.append((title, description, fixer))
        elif status == "closed":
            new_commit(fixer, created + timedelta(hours=2), f"Tidy {comp} module", comp)

        reports.append({"id": rid, "title": title, "description": description,
                        "created_at": iso(created), "closed_at": iso(closed) if closed else None,
                        "labels": labels, "assignees": assignees, "status": status})

    commits.sort(key=lambda c: (c["timestamp"], c["sha"]))
    identities = {"Bob Stone <bob@users.example.org>": "bob"}
    return reports, commits, code, identities


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data" / "mini"))
    ap.add_argument("--seed", type=int, default=20231)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    reports, commits, code, identities = generate(args.seed)

    def write_lines(name, rows):
        with open(out / name, "w", encoding="utf-8", newline="\n") as f:
            for r in rows:
                f.write(json.dumps(r, sort_keys=True) + "\n")

    write_lines("reports.jsonl", reports)
    write_lines("commits.jsonl", commits)
    write_lines("code.jsonl", code)
    with open(out / "identities.json", "w", encoding="utf-8", newline="\n") as f:
        json.dump(identities, f, indent=2, sort_keys=True)
        f.write("\n")
    print(f"{len(reports)} reports, {len(commits)} commits, {len(code)} code files -> {out}")


if __name__ == "__main__":
    main()
