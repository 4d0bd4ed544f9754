#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Point d'entrée en ligne de commande (qkz).

    python main.py check <batterie> [--config FICHIER] [--seed N] [--json SORTIE]
    python main.py series build --epsilon +- --height H
    python main.py connection extract --word 1,2
    python main.py face table --window=-3:3
"""

import argparse
import sys
import traceback

import harness
from errors import ConfigError, NonGenericError, QKZError

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_NON_GENERIC = 0, 1, 2, 3


def _epsilon(text):
    signs = {"+": 1, "-": -1}
    if not text or any(c not in signs for c in text):
        raise argparse.ArgumentTypeError(f"chaîne de signes ± attendue, reçu {text!r}")
    return tuple(signs[c] for c in text)


def _word(text):
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"indices de réflexions simples attendus, reçu {text!r}") from exc


def _window(text):
    try:
        low, high = (int(tok) for tok in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"fenêtre A:B attendue, reçu {text!r}") from exc
    if low > high:
        raise argparse.ArgumentTypeError(f"fenêtre vide {text!r}")
    return range(low, high + 1)


def build_parser():
    parser = argparse.ArgumentParser(prog="qkz", description="Vérifications numériques qKZ / qKZB de bord")
    parser.add_argument("--config", help="fichier JSON de configuration")
    parser.add_argument("--seed", type=int, help="graine du générateur aléatoire")
    parser.add_argument("--quiet", action="store_true", help="supprime les lignes d'état")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="exécute une batterie d'identités")
    check.add_argument("suite", choices=harness.SUITES + ("all",))
    check.add_argument("--json", dest="json_out", help="chemin du rapport JSON")
    check.add_argument("--oracle", action="store_true", help="contrôles mpmath supplémentaires")

    series = sub.add_parser("series", help="solutions en séries")
    series_sub = series.add_subparsers(dest="action", required=True)
    build = series_sub.add_parser("build")
    build.add_argument("--epsilon", type=_epsilon)
    build.add_argument("--height", type=int)
    build.add_argument("--json", dest="json_out")

    connection = sub.add_parser("connection", help="matrices de connexion")
    connection_sub = connection.add_subparsers(dest="action", required=True)
    extract = connection_sub.add_parser("extract")
    extract.add_argument("--word", type=_word)
    extract.add_argument("--json", dest="json_out")

    face = sub.add_parser("face", help="poids de Boltzmann du modèle de faces")
    face_sub = face.add_subparsers(dest="action", required=True)
    table = face_sub.add_parser("table")
    table.add_argument("--window", type=_window, default=harness.FACE_WINDOW)
    table.add_argument("--json", dest="json_out")
    return parser


def load_config(args, **overrides):
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.config:
        return harness.RunConfig.from_file(args.config, **overrides)
    return harness.RunConfig.from_dict({}, **overrides)


def _default_output(name, cfg):
    harness.ensure_report_dir()
    return harness.report_path(name, cfg)


def run_check(args, say):
    cfg = load_config(args, oracle=args.oracle)
    report = harness.run_suite(args.suite, cfg, quiet=args.quiet)
    path = report.write(args.json_out or _default_output(args.suite, cfg))
    say(f"💾 Rapport écrit : {path}")
    if not report.passed:
        return EXIT_FAIL
    skipped = report.skipped or any(key.endswith(".skipped") for key in report.telemetry)
    return EXIT_NON_GENERIC if skipped else EXIT_PASS


def run_export(args, say):
    if args.command == "series":
        overrides = {"height": args.height} if args.height is not None else {}
        cfg = load_config(args, **overrides)
        kind, options = "series-coefficients", {"epsilon": args.epsilon}
    elif args.command == "connection":
        cfg = load_config(args)
        kind, options = "connection-matrices", {"word": args.word}
    else:
        cfg = load_config(args)
        kind, options = "face-weights", {"window": args.window}
    say(f"📦 Export {kind}...")
    path = harness.export(kind, cfg, args.json_out or _default_output(kind, cfg), **options)
    say(f"💾 Fichier écrit : {path}")
    return EXIT_PASS


def main(argv=None):
    args = build_parser().parse_args(argv)

    def say(message):
        if not args.quiet:
            print(message)

    try:
        if args.command == "check":
            return run_check(args, say)
        return run_export(args, say)
    except ConfigError as exc:
        print(f"❌ Erreur de configuration : {exc}")
        return EXIT_CONFIG
    except NonGenericError as exc:
        say(f"⚠️ Paramètres non génériques : {exc}")
        return EXIT_NON_GENERIC
    except QKZError as exc:
        print(f"❌ Erreur : {exc}")
        if not args.quiet:
            traceback.print_exc()
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
