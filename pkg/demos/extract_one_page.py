"""Walk one page through the whole pipeline, printing each stage.

Generates a small labeled corpus, trains a model pair on most of one
site's pages, then extracts from a page the models never saw.
"""

import json
import tempfile
from pathlib import Path

from blogextract import (
    PageInput,
    analyze_page,
    build_page,
    extract,
    generate_synthetic_corpus,
    result_to_json,
    train_models,
)


def main() -> None:
    with tempfile.TemporaryDirectory() as scratch:
        corpus = generate_synthetic_corpus(
            Path(scratch), seed=1, n_sites=1, pages_per_site=10
        )
        train, held_out = corpus.pages[:8], corpus.pages[9]
        print(f"training on {len(train)} pages of site {train[0].site_id!r}")
        title_model, body_model, _ = train_models(train, c=1.0, gamma="auto")

        html = held_out.html_path.read_bytes()
        tree, geometry = build_page(PageInput(html=html, url=held_out.url))
        analysis = analyze_page(tree, geometry)
        print(f"\nheld-out page: {held_out.url}")
        print(f"  parsed nodes:      {len(tree.nodes)}")
        print(f"  title candidates:  {len(analysis.title_nodes)}")
        print(f"  body candidates:   {len(analysis.body_nodes)}")

        result = extract(
            PageInput(html=html, url=held_out.url), title_model, body_model
        )
        print("\nextracted titles:")
        for block in result.titles:
            print(f"  {block.path.as_list()}  {block.text[:60]}")
        print("extracted bodies:")
        for block in result.bodies:
            print(f"  {block.path.as_list()}  {block.text[:60]}...")

        want_titles = [p.as_list() for p in held_out.title_paths]
        got_titles = [b.path.as_list() for b in result.titles]
        print(f"\nlabels agree: {sorted(want_titles) == sorted(got_titles)}")
        print("\nJSON shape the CLI emits:")
        print(json.dumps(result_to_json(result), ensure_ascii=False)[:200], "...")


if __name__ == "__main__":
    main()
