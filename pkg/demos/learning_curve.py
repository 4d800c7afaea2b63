"""How many labeled pages does a site need?  Sweep the training size.

Joint accuracy counts a page only when both the title set and the body
set match the labels exactly, so the curve starts low and saturates
quickly.
"""

import tempfile
from pathlib import Path

from blogextract import PageCache, generate_synthetic_corpus, run_learning_curve


def main() -> None:
    with tempfile.TemporaryDirectory() as scratch:
        corpus = generate_synthetic_corpus(
            Path(scratch), seed=3, n_sites=2, pages_per_site=24
        )
        reports = run_learning_curve(
            corpus, sizes=tuple(range(2, 13, 2)), cache=PageCache()
        )
        print("pages  title  body   joint")
        for r in reports:
            bar = "#" * round(r.joint_accuracy * 40)
            print(
                f"{r.train_size:>5d}  {r.title_accuracy:.3f}  "
                f"{r.body_accuracy:.3f}  {r.joint_accuracy:.3f}  |{bar:<40}|"
            )


if __name__ == "__main__":
    main()
