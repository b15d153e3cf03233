"""Score tables: the common output of every scoring method."""

from dataclasses import dataclass, field

__all__ = ["ScoreTable", "sorted_items", "export_scores_tsv", "load_scores_tsv"]


@dataclass
class ScoreTable:
    """Real-valued scores per candidate, tagged with the producing method."""

    method: str
    scores: dict                      # canonical -> float
    params: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.scores)


def sorted_items(table):
    """(canonical, score) pairs by descending score, ties by canonical."""
    return sorted(table.scores.items(), key=lambda kv: (-kv[1], kv[0]))


def export_scores_tsv(table, path):
    """Write ``canonical<TAB>score`` rows (6 decimals), best first."""
    with open(path, "w", encoding="utf-8") as fh:
        for canonical, score in sorted_items(table):
            fh.write(f"{canonical}\t{score:.6f}\n")


def load_scores_tsv(path, method="loaded"):
    scores = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            canonical, value = line.rstrip("\n").split("\t")
            scores[canonical] = float(value)
    return ScoreTable(method=method, scores=scores)
