"""Shared fixtures: scripted git repositories encoding the three ownership
scenarios, plus a generated two-release repository for end-to-end runs.

All commits carry fixed author/committer dates so snapshots are reproducible
byte for byte.
"""
from __future__ import annotations

import os
import random
import subprocess
from pathlib import Path

import pytest

BASE_TIME = 1600000000
STEP = 1000

CHRIS = ("Chris", "chris@example.com")
PAT = ("Pat", "pat@example.com")
JANE = ("Jane", "jane@example.com")
BOB = ("Bob", "bob@example.com")
MARY = ("Mary", "mary@example.com")
LINDA = ("Linda", "linda@example.com")


def run_git(repo: Path, *args: str, env: dict | None = None) -> str:
    full_env = dict(os.environ)
    full_env.update(
        {
            "GIT_CONFIG_GLOBAL": "/dev/null",
            "GIT_CONFIG_SYSTEM": "/dev/null",
        }
    )
    if env:
        full_env.update(env)
    proc = subprocess.run(
        ["git", "-C", str(repo), *args],
        capture_output=True,
        text=True,
        env=full_env,
        check=True,
    )
    return proc.stdout


class RepoBuilder:
    """Small helper to script deterministic repositories."""

    def __init__(self, root: Path):
        self.root = root
        self.tick = 0
        root.mkdir(parents=True, exist_ok=True)
        run_git(root, "init", "-q", "-b", "main")

    def _env(self, author: tuple[str, str]) -> dict:
        name, email = author
        stamp = f"{BASE_TIME + self.tick * STEP} +0000"
        self.tick += 1
        return {
            "GIT_AUTHOR_NAME": name,
            "GIT_AUTHOR_EMAIL": email,
            "GIT_AUTHOR_DATE": stamp,
            "GIT_COMMITTER_NAME": name,
            "GIT_COMMITTER_EMAIL": email,
            "GIT_COMMITTER_DATE": stamp,
        }

    def write(self, path: str, text: str) -> None:
        target = self.root / path
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")

    def write_bytes(self, path: str, blob: bytes) -> None:
        target = self.root / path
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(blob)

    def remove(self, path: str) -> None:
        (self.root / path).unlink()

    def commit(self, message: str, author: tuple[str, str]) -> str:
        run_git(self.root, "add", "-A")
        run_git(
            self.root,
            "commit",
            "-q",
            "--allow-empty",
            "-m",
            message,
            env=self._env(author),
        )
        return run_git(self.root, "rev-parse", "HEAD").strip()

    def merge(self, branch: str, message: str, author: tuple[str, str]) -> str:
        run_git(
            self.root, "merge", "-q", "--no-ff", "-m", message, branch,
            env=self._env(author),
        )
        return run_git(self.root, "rev-parse", "HEAD").strip()

    def branch(self, name: str, start: str = "HEAD") -> None:
        run_git(self.root, "branch", name, start)

    def checkout(self, name: str) -> None:
        run_git(self.root, "checkout", "-q", name)

    def tag(self, name: str) -> None:
        run_git(self.root, "tag", name)


def java_lines(prefix: str, count: int, start: int = 1) -> str:
    return "".join(f"// {prefix} line {i:03d}\n" for i in range(start, start + count))


def build_scenario1(root: Path) -> RepoBuilder:
    """One big authored file, then repeated small patches by someone else.

    Window (.., r1) holds 4 commits touching A.java: 1 by chris (84 lines),
    3 by pat (2 appended lines each). At r1 the file has 90 lines: 84 still
    chris's, 6 pat's.
    """
    repo = RepoBuilder(root)
    repo.write("A.java", java_lines("A original", 84))
    repo.commit("add A.java", CHRIS)
    body = java_lines("A original", 84)
    for patch in range(1, 4):
        body += java_lines(f"A patch{patch}", 2)
        repo.write("A.java", body)
        repo.commit(f"patch {patch}", PAT)
    repo.tag("r1")
    return repo


def build_scenario2(root: Path) -> RepoBuilder:
    """Many commits fully overwritten by a later contributor.

    jane commits B.java three times; bob's single commit rewrites all 10
    lines. At r1 jane has 3 of 4 commits but zero surviving lines.
    """
    repo = RepoBuilder(root)
    for version in range(1, 4):
        repo.write("B.java", java_lines(f"B v{version}", 10))
        repo.commit(f"B v{version}", JANE)
    repo.write("B.java", java_lines("B final", 10))
    repo.commit("rewrite B", BOB)
    repo.tag("r1")
    return repo


def build_scenario3(root: Path) -> RepoBuilder:
    """Author of a previous release making no commits in the current window.

    mary writes 95 lines before r1; the (r1, r2] window holds a single
    5-line append by linda. At r2 the file is 100 lines: mary 95, linda 5.
    """
    repo = RepoBuilder(root)
    repo.write("C.java", java_lines("C base", 95))
    repo.commit("add C.java", MARY)
    repo.tag("r1")
    repo.write("C.java", java_lines("C base", 95) + java_lines("C tail", 5, start=96))
    repo.commit("append tail", LINDA)
    repo.tag("r2")
    return repo


AUTHOR_POOL = [
    ("Dev One", "dev1@example.com"),
    ("Dev Two", "dev2@example.com"),
    ("Dev Three", "dev3@example.com"),
    ("Dev Four", "dev4@example.com"),
    ("Dev Five", "dev5@example.com"),
    ("Dev Six", "dev6@example.com"),
]


def build_minirepo(root: Path, n_files: int = 120, seed: int = 7) -> RepoBuilder:
    """A small project history: two tagged releases, several authors, a
    merge, a binary blob, and non-java files the filter must drop."""
    rng = random.Random(seed)
    repo = RepoBuilder(root)
    paths = [f"src/pkg{i % 8}/File{i:03d}.java" for i in range(n_files)]

    for start in range(0, n_files, 5):
        author = rng.choice(AUTHOR_POOL)
        for i in range(start, min(start + 5, n_files)):
            repo.write(paths[i], java_lines(f"F{i}", rng.randint(5, 40)))
        repo.commit(f"add files {start}..{start + 4}", author)
    repo.write("README.md", "mini project\n")
    repo.write_bytes("blob/Data.java", b"\x00\x01\x02binary\x00junk")
    repo.commit("docs and data", rng.choice(AUTHOR_POOL))
    repo.tag("v1")

    # feature edits files 0..5 only; main reworks a disjoint range, so the
    # merge stays conflict-free
    repo.branch("feature")
    repo.checkout("feature")
    for i in range(6):
        repo.write(paths[i], java_lines(f"F{i} feature", rng.randint(5, 30)))
        repo.commit(f"feature touch {i}", rng.choice(AUTHOR_POOL))
    repo.checkout("main")
    for _ in range(12):
        i = rng.randrange(6, n_files)
        repo.write(paths[i], java_lines(f"F{i} rework", rng.randint(5, 35)))
        repo.commit(f"rework {i}", rng.choice(AUTHOR_POOL))
    repo.merge("feature", "merge feature", ("Release Bot", "bot@example.com"))
    for i in range(n_files, n_files + 10):
        path = f"src/new/File{i:03d}.java"
        repo.write(path, java_lines(f"F{i}", rng.randint(5, 25)))
        repo.commit(f"add file {i}", rng.choice(AUTHOR_POOL))
    repo.tag("v2")
    return repo


@pytest.fixture(scope="session")
def scenario1_repo(tmp_path_factory) -> Path:
    return build_scenario1(tmp_path_factory.mktemp("scenario1")).root


@pytest.fixture(scope="session")
def scenario2_repo(tmp_path_factory) -> Path:
    return build_scenario2(tmp_path_factory.mktemp("scenario2")).root


@pytest.fixture(scope="session")
def scenario3_repo(tmp_path_factory) -> Path:
    return build_scenario3(tmp_path_factory.mktemp("scenario3")).root


@pytest.fixture(scope="session")
def minirepo(tmp_path_factory) -> Path:
    return build_minirepo(tmp_path_factory.mktemp("minirepo")).root
