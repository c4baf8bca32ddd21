"""Estimate and fit every Europarl language found under a directory.

The directory holds either ``<lang>.tsv`` rank-frequency files (from
``ranklaw count``) or raw ``<lang>/*.txt`` files as distributed.  Each row
shows our estimate and fit followed by the published estimate.

    python3 scripts/europarl_table.py ~/data/europarl --step 0.001
"""

import argparse

from ranklaw import GammaGrid, refine, rmse, search
from ranklaw.corpus import TokenizationConfig
from ranklaw.reference import ESTIMATED, compare, load_language


def fmt(p, r):
    return f"{p.alpha:.2f}\t{p.beta:.2f}\t{p.log10_gamma:.2f}\t{p.log10_C:.2f}\t{r:.3f}"


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("root")
    ap.add_argument("--langs", nargs="+", default=sorted(ESTIMATED))
    ap.add_argument("--step", type=float, default=1e-3)
    ap.add_argument("--lowercase", action="store_true")
    ap.add_argument("--drop-numerals", action="store_true")
    args = ap.parse_args()
    config = TokenizationConfig(
        lowercase=args.lowercase, skip_markup_lines=True, drop_numerals=args.drop_numerals
    )

    print("lang\ta\tb\tg\tlogC\trmse\t|\tfit a\tb\tg\tlogC\trmse\t|\tpub a\tb\tg\tlogC\trmse\tok")
    for lang in args.langs:
        s = load_language(args.root, lang, config)
        if s is None:
            continue
        est, trace = search(s, GammaGrid(0.0, 10.0, args.step))
        fit = refine(s, est)
        verdict = compare(lang, est, rmse(s, est))
        pub = "\t".join(f"{v:g}" for v in ESTIMATED[lang])
        flags = "" if trace.identifiable else " (flat tail)"
        print(
            f"{lang}\t{fmt(est, rmse(s, est))}\t|\t{fmt(fit.refined, fit.rmse_refined)}\t|\t{pub}\t"
            f"{'yes' if verdict['passed'] else 'no'}{flags}"
        )


if __name__ == "__main__":
    main()
