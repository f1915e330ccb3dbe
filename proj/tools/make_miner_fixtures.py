#!/usr/bin/env python3
"""Writes the recorded tracker responses used by the miner tests.

Each scenario directory holds index.json plus one body file per response.
Body files are named like the miner's fixture_file_name(): 64-bit FNV-1a of
the target without its page parameter, then the page number.
"""

import json
import shutil
import sys
from pathlib import Path
from urllib.parse import parse_qsl

REPO = "acme/widget"
API = "https://api.github.com"


def fnv1a(text: str) -> int:
    h = 0xCBF29CE484222325
    for b in text.encode():
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def file_name(target: str) -> str:
    path, _, query = target.partition("?")
    page = 1
    kept = []
    for k, v in parse_qsl(query, keep_blank_values=True):
        if k == "page":
            page = int(v)
        else:
            kept.append(f"{k}={v}")
    endpoint = path + ("?" + "&".join(kept) if kept else "")
    return f"{fnv1a(endpoint):016x}-{page}.json"


class Scenario:
    def __init__(self, root: Path, name: str):
        self.dir = root / name
        shutil.rmtree(self.dir, ignore_errors=True)
        self.dir.mkdir(parents=True)
        self.responses = []

    def add(self, target, body=None, status=200, headers=None, suffix=""):
        entry = {"target": target, "status": status}
        if headers:
            entry["headers"] = headers
        if body is not None:
            name = file_name(target)
            if suffix:
                name = name.replace(".json", f"-{suffix}.json")
            (self.dir / name).write_text(json.dumps(body, indent=1) + "\n")
            entry["file"] = name
        self.responses.append(entry)

    def close(self):
        (self.dir / "index.json").write_text(json.dumps({"responses": self.responses}, indent=1) + "\n")


def issues_target(page, per_page=100):
    return f"/repos/{REPO}/issues?state=all&per_page={per_page}&page={page}"


def commits_target(page, per_page=100):
    return f"/repos/{REPO}/commits?per_page={per_page}&page={page}"


def issue(number, closed=True, pr=False, assignee=None):
    day = 1 + number % 27
    rec = {
        "number": number,
        "title": f"Crash {number} when saving",
        "body": f"Steps to reproduce issue {number}.",
        "state": "closed" if closed else "open",
        "created_at": f"2023-02-{day:02d}T10:00:00Z",
        "closed_at": f"2023-02-{day:02d}T18:00:00Z" if closed else None,
        "labels": [{"name": "bug"}],
        "assignees": [{"login": assignee}] if assignee else [],
        "assignee": {"login": assignee} if assignee else None,
    }
    if pr:
        rec["pull_request"] = {"url": f"{API}/repos/{REPO}/pulls/{number}"}
    return rec


def commit_detail(sha, message, files, author_login, date):
    signature = {"name": "Dana Roe", "email": "dana@example.org", "date": date}
    return {
        "sha": sha,
        "commit": {"message": message, "author": signature, "committer": dict(signature)},
        "author": {"login": author_login} if author_login else None,
        "committer": {"login": author_login} if author_login else None,
        "files": [{"filename": f} for f in files],
    }


SHA_A = "a1" * 20
SHA_B = "b2" * 20


def link(page, last):
    return {"Link": f'<{API}{issues_target(page)}>; rel="next", <{API}{issues_target(last)}>; rel="last"'}


def main(root: Path):
    s = Scenario(root, "empty")
    s.add(issues_target(1), [])
    s.add(commits_target(1), [])
    s.close()

    # 201 issues over three pages; the last page also holds a pull request.
    s = Scenario(root, "paged")
    numbers = list(range(1, 202))
    for page in (1, 2, 3):
        chunk = [issue(n, assignee="alice" if n % 2 else None) for n in numbers[(page - 1) * 100 : page * 100]]
        if page == 3:
            chunk.append(issue(500, pr=True))
        s.add(issues_target(page), chunk, headers=link(page + 1, 3) if page < 3 else None)
    s.add(commits_target(1), [{"sha": SHA_A}, {"sha": SHA_B}])
    s.add(f"/repos/{REPO}/commits/{SHA_A}",
          commit_detail(SHA_A, "Fixes #1", ["src/save.cpp", "src/io.cpp"], "alice", "2023-02-02T11:00:00Z"))
    s.add(f"/repos/{REPO}/commits/{SHA_B}",
          commit_detail(SHA_B, "Closes #2", ["src/ui.cpp"], None, "2023-02-03T12:00:00Z"))
    s.close()

    # Rate limited once on the issues endpoint, a server error once on commits.
    s = Scenario(root, "rate_limited")
    s.add(issues_target(1), {"message": "API rate limit exceeded"}, status=403,
          headers={"X-RateLimit-Remaining": "0", "X-RateLimit-Reset": "1700000060"}, suffix="limited")
    s.add(issues_target(1), [issue(7, assignee="bob")])
    s.add(commits_target(1), {"message": "bad gateway"}, status=502, suffix="error")
    s.add(commits_target(1), [])
    s.close()

    s = Scenario(root, "unauthorized")
    s.add(issues_target(1), {"message": "Bad credentials"}, status=401)
    s.close()

    s = Scenario(root, "server_down")
    s.add(issues_target(1), {"message": "unavailable"}, status=503)
    s.close()


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "tests" / "fixtures")
