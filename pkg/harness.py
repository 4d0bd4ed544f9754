#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Orchestration des batteries de vérification, configuration des campagnes,
rapports JSON et exports.
"""

import hashlib
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

import config
from baxter_face import (
    FaceWeightTable,
    K_Ba,
    R_Ba,
    W_8vSOS_standard,
    admissible_boundary_tuples,
    admissible_hexagons,
    beta_Ba,
    crossing_residual,
    face_scale,
    gauged_Ba,
    mu_dual_fn,
    mu_fn,
    perturbed_R,
    root_row_sign,
    spin_reversal_residual,
)
from elliptic_connection import (
    K_cm,
    M_cm_generator,
    R_cm,
    cocycle_law_residual,
    dynamical_unitarity_residual,
    dynamical_ybe_residual,
    extract_connection,
    extraction_point,
    frame_condition,
    left_from_right,
    left_reflection_residual,
    right_reflection_residual,
    theta_link_residuals,
)
from errors import ConfigError, IllConditionedError, NonGenericError, PoleError, QKZError
from numerics import theta, theta_mp
from principal_series import MultiplicityFunction, genericity
from qkz_series import (
    chamber_point,
    cross_route_check,
    default_height,
    from_document,
    solve_basis,
    solve_gamma,
    to_document,
    transport_residual,
)
from qkzb import (
    baxter_system,
    braid_residuals,
    hypothesis_residuals,
    sample_functions,
    sensitivity_check,
    transport_two_route_residual,
)
from spin_rep import (
    ParameterSet,
    all_braid_residuals,
    hecke_residual,
    triangularity_residual,
    v_epsilon_residual,
    y_commutator_residual,
    y_eigen_residual,
)
from trig_cocycle import (
    K_unitarity_residual as trig_K_unitarity_residual,
    baxterization_residual,
    cocycle_braid_residual,
    cocycle_unitarity_residual,
    left_reflection_residual as trig_left_reflection_residual,
    right_reflection_residual as trig_right_reflection_residual,
    transport_compatibility_residual,
    transport_explicit_residual,
    unitarity_residual,
    ybe_residual,
)
from weylc import WeylElement

SUITES = ("hecke", "trig", "series", "connection", "baxter", "face", "qkzb")
EXPORT_KINDS = ("series-coefficients", "face-weights", "connection-matrices")
WORKERS = 4
SENSITIVITY_FLOOR = 1e-4
FACE_WINDOW = range(-3, 4)


def _pair(value):
    value = complex(value)
    return [value.real, value.imag]


def _parse_complex(field_name, raw):
    if isinstance(raw, list) and len(raw) == 2:
        return complex(raw[0], raw[1])
    try:
        return complex(str(raw).replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(field_name, f"valeur complexe invalide {raw!r}") from exc


# ============ CONFIGURATION ============

@dataclass
class RunConfig:
    """Paramètres d'une campagne de vérification"""

    n: int = config.N
    q: float = config.Q
    kappa: complex = config.KAPPA
    zeta: complex = config.ZETA
    zeta_p: complex = config.ZETA_PRIME
    upsilon: complex = config.UPSILON
    upsilon_p: complex = config.UPSILON_PRIME
    xi: complex = config.XI
    left_pack: tuple = (config.ZETA_LEFT, config.ZETA_PRIME_LEFT,
                        config.UPSILON_LEFT, config.UPSILON_PRIME_LEFT)
    height: int = config.HEIGHT
    connection_q: float = config.CONNECTION_Q
    connection_height: int = config.CONNECTION_HEIGHT
    samples: int = config.SAMPLES
    hecke_samples: int = config.HECKE_SAMPLES
    seed: int = config.SEED
    box: float = 0.5
    tolerances: Dict[str, float] = field(default_factory=lambda: dict(config.TOLERANCES))
    oracle: bool = False

    _COMPLEX = ("kappa", "zeta", "zeta_p", "upsilon", "upsilon_p", "xi")

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.n < 2:
            raise ConfigError("n", f"rang ≥ 2 requis, reçu {self.n}")
        if not 0 < self.q < 1:
            raise ConfigError("q", f"doit appartenir à ]0,1[, reçu {self.q}")
        if not 0 < self.connection_q < 1:
            raise ConfigError("connection_q", f"doit appartenir à ]0,1[, reçu {self.connection_q}")
        for name in ("samples", "hecke_samples"):
            if getattr(self, name) < 1:
                raise ConfigError(name, f"au moins un échantillon, reçu {getattr(self, name)}")
        if len(self.left_pack) != 4:
            raise ConfigError("left_pack", "quatre couplages attendus (ζ, ζ', υ, υ')")
        unknown = set(self.tolerances) - set(config.TOLERANCES)
        if unknown:
            raise ConfigError("tolerances", f"clés inconnues {sorted(unknown)}")

    @classmethod
    def from_file(cls, path, **overrides):
        """Config JSON ; les clés absentes gardent les valeurs de config.py"""
        try:
            with open(path, encoding="utf-8") as handle:
                raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"ligne {exc.lineno}, colonne {exc.colno} : {exc.msg}") from exc
        except OSError as exc:
            raise ConfigError("config", f"lecture impossible de {path} : {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config", "objet JSON attendu")
        return cls.from_dict(raw, **overrides)

    @classmethod
    def from_dict(cls, raw, **overrides):
        known = {f.name for f in fields(cls)}
        values = {}
        for key, value in {**raw, **overrides}.items():
            if key not in known or key.startswith("_"):
                raise ConfigError(key, "clé inconnue")
            if key in cls._COMPLEX:
                value = _parse_complex(key, value)
            elif key == "left_pack":
                if not isinstance(value, list):
                    raise ConfigError(key, "liste de quatre couplages attendue")
                value = tuple(_parse_complex(key, v) for v in value)
            elif key == "tolerances":
                if not isinstance(value, dict):
                    raise ConfigError(key, "dictionnaire attendu")
                value = {**config.TOLERANCES, **{k: float(v) for k, v in value.items()}}
            elif key in ("n", "height", "connection_height", "samples", "hecke_samples", "seed"):
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ConfigError(key, f"entier attendu, reçu {value!r}")
            elif key in ("q", "connection_q", "box"):
                if not isinstance(value, (int, float)) or isinstance(value, bool):
                    raise ConfigError(key, f"réel attendu, reçu {value!r}")
                value = float(value)
            values[key] = value
        return cls(**values)

    def params(self, n=None):
        return ParameterSet(q=self.q, kappa=self.kappa, zeta=self.zeta, zeta_p=self.zeta_p,
                            upsilon=self.upsilon, upsilon_p=self.upsilon_p, xi=self.xi,
                            n=self.n if n is None else n)

    def connection_params(self):
        return replace(self.params(), q=self.connection_q)

    def truncation(self):
        return self.height or default_height(self.n)

    def tolerance(self, name):
        return config.TOL_OVERRIDE or self.tolerances[name]

    def rng(self, salt=""):
        digest = hashlib.sha256(f"{self.seed}:{salt}".encode()).digest()
        return np.random.default_rng(int.from_bytes(digest[:8], "big"))

    def as_dict(self):
        out = {}
        for key, value in asdict(self).items():
            if key in self._COMPLEX:
                value = _pair(value)
            elif key == "left_pack":
                value = [_pair(v) for v in value]
            out[key] = value
        return out


# ============ RAPPORTS ============

def digest(inputs):
    """Empreinte stable des entrées échantillonnées"""
    def encode(value):
        if isinstance(value, (complex, np.complexfloating)):
            return [round(value.real, 14), round(value.imag, 14)]
        if isinstance(value, (float, np.floating)):
            return round(float(value), 14)
        if isinstance(value, (list, tuple, np.ndarray)):
            return [encode(v) for v in value]
        if isinstance(value, (np.integer,)):
            return int(value)
        return value
    text = json.dumps(encode(inputs), sort_keys=True)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass
class CheckCase:
    identity: str
    anchor: str
    inputs: str
    residual: float
    tolerance: float
    passed: bool

    def as_dict(self):
        residual = self.residual if np.isfinite(self.residual) else "inf"
        return {"identity": self.identity, "anchor": self.anchor, "inputs": self.inputs,
                "residual": residual, "tolerance": self.tolerance, "pass": self.passed}


@dataclass
class CheckReport:
    """Résultat d'une batterie ; JSON à schéma stable"""

    suite: str
    cases: List[CheckCase] = field(default_factory=list)
    skipped: Optional[str] = None
    telemetry: Dict[str, float] = field(default_factory=dict)

    def add(self, identity, anchor, inputs, residual, tolerance, minimum=False):
        """minimum=True : le cas passe si le résidu dépasse la tolérance (contrôle de sensibilité)"""
        residual = float(residual)
        passed = residual >= tolerance if minimum else residual <= tolerance
        self.cases.append(CheckCase(identity, anchor, digest(inputs), residual, tolerance, bool(passed)))

    def note(self, key, value):
        self.telemetry[key] = max(self.telemetry.get(key, 0.0), float(value))

    def extend(self, other):
        prefix = f"{other.suite}."
        for case in other.cases:
            identity = case.identity if case.identity.startswith(prefix) else prefix + case.identity
            self.cases.append(replace(case, identity=identity))
        for key, value in other.telemetry.items():
            self.note(f"{other.suite}.{key}", value)
        if other.skipped:
            self.telemetry[f"{other.suite}.skipped"] = 1.0

    @property
    def failures(self):
        return [case for case in self.cases if not case.passed]

    @property
    def passed(self):
        return not self.failures

    def summary(self):
        return {"cases": len(self.cases), "passed": len(self.cases) - len(self.failures),
                "failed": len(self.failures)}

    def as_dict(self):
        return {
            "suite": self.suite,
            "skipped": self.skipped,
            "summary": self.summary(),
            "telemetry": {k: self.telemetry[k] for k in sorted(self.telemetry)},
            "cases": [case.as_dict() for case in self.cases],
        }

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True, indent=2, ensure_ascii=False)

    def write(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json() + "\n", encoding="utf-8")
        return path


# ============ ÉCHANTILLONNAGE ============

def _sample_complex(rng, size, box):
    return box * (rng.uniform(-1, 1, size=size) + 1j * rng.uniform(-1, 1, size=size))


def _perturbed_params(base, rng, box):
    """Point de paramètres voisin du point de base"""
    d = _sample_complex(rng, 6, 0.2 * box)
    return replace(base, kappa=base.kappa + d[0], zeta=base.zeta + d[1], zeta_p=base.zeta_p + d[2],
                   upsilon=base.upsilon + d[3], upsilon_p=base.upsilon_p + d[4], xi=base.xi + d[5])


def _pool_map(fn, items):
    """Évaluation parallèle, résultats dans l'ordre des entrées"""
    with ThreadPoolExecutor(max_workers=WORKERS) as pool:
        return list(pool.map(fn, items))


# ============ BATTERIES ============

class SuiteRunner:
    """Exécute les batteries d'identités et assemble les rapports"""

    def __init__(self, quiet=False):
        self.quiet = quiet

    def say(self, message):
        if not self.quiet:
            print(message)

    # ============ HECKE ============

    def hecke(self, cfg, report):
        rng = cfg.rng("hecke")
        tol = cfg.tolerance("hecke")
        base = cfg.params()
        points = [base] + [_perturbed_params(base, rng, cfg.box) for _ in range(cfg.hecke_samples - 1)]

        def evaluate(p):
            try:
                return p, {
                    "quadratique": max(hecke_residual(j, p) for j in range(p.n + 1)),
                    "tresses": max(all_braid_residuals(p).values()),
                    "Y_commutent": y_commutator_residual(p),
                    "spectre_Y": y_eigen_residual(p),
                    "triangularite_b": triangularity_residual(p),
                    "v_epsilon": v_epsilon_residual(p),
                }
            except (NonGenericError, PoleError):
                return p, None

        anchors = {
            "quadratique": "relations quadratiques des générateurs T_j",
            "tresses": "relations de tresses du diagramme C_n affine",
            "Y_commutent": "commutativité des opérateurs Y_i",
            "spectre_Y": "valeurs propres de Y_i sur la base b_ε",
            "triangularite_b": "triangularité de Bruhat de la base b_ε",
            "v_epsilon": "π(T_{w_ε}) v_+ = v_ε",
        }
        skipped = 0
        for p, residuals in _pool_map(evaluate, points):
            if residuals is None:
                skipped += 1
                continue
            for key, value in residuals.items():
                report.add(f"hecke.{key}", anchors[key], list(p.as_dict().values()), value, tol)
        report.note("points_non_generiques", skipped)

    # ============ TRIGONOMÉTRIQUE ============

    def trig(self, cfg, report):
        rng = cfg.rng("trig")
        tol = cfg.tolerance("trig")
        p = cfg.params()
        n = p.n
        samples = [_sample_complex(rng, n + 3, cfg.box) for _ in range(cfg.samples)]

        def evaluate(sample):
            z, (a, b, c) = sample[:n], sample[n:]
            out = {
                "ybe": ybe_residual(a, b, c, p),
                "unitarite": unitarity_residual(a, p),
                "unitarite_K": trig_K_unitarity_residual(a, p),
                "reflexion_droite": trig_right_reflection_residual(a, b, p),
                "reflexion_gauche": trig_left_reflection_residual(a, b, p),
                "baxterisation": max(baxterization_residual(j, z, p) for j in range(n + 1)),
                "cocycle_tresses": max(cocycle_braid_residual(i, j, z, p)
                                       for i in range(n + 1) for j in range(i + 1, n + 1)),
                "cocycle_involution": max(cocycle_unitarity_residual(j, z, p) for j in range(n + 1)),
                "transport_explicite": max(transport_explicit_residual(i, z, p) for i in range(1, n + 1)),
            }
            lam = np.zeros(n, dtype=int)
            lam[0] = 1
            mu = np.zeros(n, dtype=int)
            mu[-1] = 1
            out["transport_compatible"] = transport_compatibility_residual(lam, mu, z, p)
            return sample, out

        anchors = {
            "ybe": "équation de Yang-Baxter",
            "unitarite": "unitarité de R",
            "unitarite_K": "unitarité de K et K̲",
            "reflexion_droite": "équation de réflexion droite",
            "reflexion_gauche": "équation de réflexion gauche",
            "baxterisation": "baxtérisation des générateurs de Hecke",
            "cocycle_tresses": "relations de tresses du cocycle",
            "cocycle_involution": "C^{s_j}(z) C^{s_j}(s_j z) = Id",
            "transport_explicite": "produit développé de C^{τ(-e_i)}",
            "transport_compatible": "C^{τ(λ)}(z) C^{τ(μ)}(z-λ) = C^{τ(λ+μ)}(z)",
        }
        for sample, residuals in _pool_map(evaluate, samples):
            for key, value in residuals.items():
                report.add(f"trig.{key}", anchors[key], sample, value, tol)

    # ============ SÉRIES ============

    def series(self, cfg, report):
        p = cfg.params()
        H = cfg.truncation()
        self.say(f"🔧 Résolution de la base de séries (n={p.n}, H={H})...")
        basis = solve_basis(p, height_cap=H)
        deep = chamber_point(p.n, depth=4.0, wobble=0.1)
        for sol in basis:
            report.add("series.coherence", "cohérence des systèmes par hauteur",
                       [list(sol.label), H], sol.consistency(), cfg.tolerance("series_consistency"))
            report.add("series.transport", "équations qKZ de bord au fond de la chambre",
                       [list(sol.label), deep], transport_residual(sol, deep),
                       cfg.tolerance("series_transport"))

        eps = basis[0].label
        finer = solve_gamma(eps, H + 2, p)
        coarse_residual = transport_residual(basis[0], deep)
        gain = transport_residual(finer, deep) / max(coarse_residual, 1e-300)
        report.add("series.gain_hauteur", "décroissance du résidu quand H → H+2",
                   [list(eps), H], gain, 0.1)

        rng = cfg.rng("series")
        count = min(20, cfg.samples)
        zs = [chamber_point(p.n, depth=3.0 + rng.uniform(0, 1), wobble=rng.uniform(-0.3, 0.3))
              for _ in range(count)]
        for sol in basis:
            ratios, misfits = cross_route_check(sol.label, p, zs, height_cap=H)
            ratios = np.array(ratios)
            inputs = [list(sol.label), zs]
            tol = cfg.tolerance("cross_route")
            report.add("series.route_croisee", "indépendance en z du rapport entre constructions",
                       inputs, float(np.max(np.abs(ratios - ratios[0]))), tol)
            report.add("series.route_croisee_unite", "Φ^I_{w_ε^{-1}} = Φ_ε (rapport égal à 1)",
                       inputs, float(np.max(np.abs(ratios - 1))), tol)
            report.add("series.route_croisee_proportion", "Φ^I_{w_ε^{-1}} proportionnelle à Φ_ε",
                       inputs, max(misfits), tol)

    # ============ CONNEXION ============

    def connection(self, cfg, report):
        p = cfg.connection_params()
        H = cfg.connection_height
        tol = cfg.tolerance("connection")
        rng = cfg.rng("connection")
        self.say(f"🔧 Base de séries pour l'extraction (q={p.q}, H={H})...")
        basis = solve_basis(p, height_cap=H)
        shift = np.zeros(p.n)
        shift[0] = 1.0
        count = min(10, cfg.samples)
        for _ in range(count):
            z = extraction_point(p.n, wobble=rng.uniform(-0.3, 0.3))
            try:
                report.note("conditionnement", frame_condition(basis, z))
                for i in range(1, p.n + 1):
                    s = WeylElement.simple(i, p.n)
                    extracted = extract_connection(s, z, basis)
                    expected = M_cm_generator(i, z, p.xi, p)
                    deviation = float(np.max(np.abs(extracted - expected)))
                    report.note("ecart_max", deviation)
                    report.add("connection.formule_theta", "matrices de connexion en fonctions thêta",
                               [i, z], deviation, tol)
                    moved = extract_connection(s, z + shift, basis)
                    report.add("connection.periodicite", "coefficients elliptiques périodiques en z",
                               [i, z], float(np.max(np.abs(moved - extracted))), tol)
            except IllConditionedError as exc:
                report.note("conditionnement", exc.cond)
                report.add("connection.conditionnement", "inversibilité de Φ(z)", [z], np.inf, tol)

        cocycle_tol = cfg.tolerance("cocycle")
        w0 = WeylElement.longest(p.n)
        for _ in range(cfg.samples):
            z = _sample_complex(rng, p.n, cfg.box)
            xi = complex(_sample_complex(rng, 1, cfg.box)[0])
            for i in range(1, p.n + 1):
                report.add("connection.loi_cocycle", "loi de cocycle de M_cm", [i, z, xi],
                           cocycle_law_residual(WeylElement.simple(i, p.n), w0, z, xi, p), cocycle_tol)
            for key, value in theta_link_residuals(z[0], xi, p).items():
                report.add(f"connection.lien_theta_{key}", "R_cm exprimée par e_α et C",
                           [z[0], xi], value, cfg.tolerance("dynamical"))

    # ============ DYNAMIQUE (BAXTER) ============

    def baxter(self, cfg, report):
        p = cfg.params()
        tol = cfg.tolerance("dynamical")
        rng = cfg.rng("baxter")
        m = MultiplicityFunction.from_params(p)
        R_g, K_g = gauged_Ba(p)
        pairs = {
            "cm": (lambda z, xi: R_cm(z, xi, p), lambda z, xi: K_cm(z, xi, p)),
            "Ba": (lambda z, xi: R_Ba(z, xi, p), lambda z, xi: K_Ba(z, xi, p)),
            "jauge": (R_g, K_g),
        }
        samples = [_sample_complex(rng, 4, cfg.box) for _ in range(cfg.samples)]

        def evaluate(sample):
            z1, z2, z3, xi = sample
            out = {}
            for label, (R, K) in pairs.items():
                out[f"dybe_{label}"] = dynamical_ybe_residual(R, z1, z2, z3, xi, p.kappa)
                out[f"unitarite_{label}"] = dynamical_unitarity_residual(R, z1, xi)
                out[f"reflexion_droite_{label}"] = right_reflection_residual(R, K, z1, z2, xi, p.kappa)
            R, K = pairs["Ba"]
            out["reflexion_gauche_Ba"] = left_reflection_residual(R, left_from_right(K), z1, z2, xi, p.kappa)
            out["croisement"] = crossing_residual(z1, xi, p)
            out["renversement_spin"] = spin_reversal_residual(z1, xi, p)
            beta = beta_Ba(z1, xi, p)
            out["decouplage_beta"] = abs(beta - mu_dual_fn(xi, p) / mu_fn(-z1, p)) / max(1.0, abs(beta))
            out["identite_theta"] = max(theta_link_residuals(z1, xi, p).values())
            return sample, out

        for sample, residuals in _pool_map(evaluate, samples):
            for key, value in residuals.items():
                report.add(f"baxter.{key}", _baxter_anchor(key), sample, value, tol)
        report.note("multiplicite_kappa", abs(m.kappa))

    # ============ FACES ============

    def face(self, cfg, report):
        p = cfg.params()
        tol = cfg.tolerance("face")
        rng = cfg.rng("face")
        tables = {"8vSOS": FaceWeightTable.for_8vsos(p), "Ba": FaceWeightTable.for_baxter(p)}
        hexagons = list(admissible_hexagons(FACE_WINDOW))
        boundary = list(admissible_boundary_tuples(FACE_WINDOW))
        count = min(20, cfg.samples)
        for _ in range(count):
            z1, z2, z3, xi = _sample_complex(rng, 4, cfg.box)
            for label, table in tables.items():
                worst = max(table.star_triangle_residual(h, z1, z2, z3, xi) for h in hexagons)
                report.add(f"face.etoile_triangle_{label}", "relation étoile-triangle",
                           [z1, z2, z3, xi], worst, tol)
                worst = max(table.boundary_ybe_residual(t, z1, z2, xi) for t in boundary)
                report.add(f"face.ybe_bord_{label}", "équation de Yang-Baxter de bord (faces)",
                           [z1, z2, xi], worst, tol)
                scale = face_scale(z1, p) * face_scale(-z1, p) if label == "8vSOS" else 1.0
                worst = max(table.inversion_residual(a, b, c, d, z1, xi, scale=scale)
                            for a in FACE_WINDOW for b in (a - 1, a + 1) for d in (a - 1, a + 1)
                            for c in (d - 1, d + 1) if abs(c - b) == 1)
                report.add(f"face.inversion_{label}", "relation d'inversion", [z1, xi], worst, tol)
                worst = max(table.boundary_inversion_residual(a, b, c, z1, xi)
                            for b in FACE_WINDOW for a in (b - 1, b + 1) for c in (b - 1, b + 1))
                report.add(f"face.inversion_bord_{label}", "inversion des poids de bord",
                           [z1, xi], worst, tol)
            table = tables["8vSOS"]
            worst = 0.0
            for a in FACE_WINDOW:
                for s in (1, -1):
                    for heights in [(a, a + s, a + s, a), (a, a + s, a + s, a + 2 * s)]:
                        worst = max(worst, abs(table.W(*heights, z1, xi) - W_8vSOS_standard(*heights, z1, xi, p)))
                    heights = (a, a + s, a - s, a)
                    signed = root_row_sign(a, s, xi, p) * W_8vSOS_standard(*heights, z1, xi, p)
                    worst = max(worst, abs(table.W(*heights, z1, xi) - signed))
            report.add("face.table_8vSOS", "poids standard du modèle à huit sommets en faces",
                       [z1, xi], worst, tol)
            broken = FaceWeightTable(perturbed_R(tables["Ba"].R_fn, 1e-3), tables["Ba"].K_fn, p.kappa)
            worst = max(broken.star_triangle_residual(h, z1, z2, z3, xi) for h in hexagons)
            report.add("face.perturbation_felder", "une perturbation de R casse l'étoile-triangle",
                       [z1, z2, z3, xi], worst, SENSITIVITY_FLOOR, minimum=True)

    # ============ qKZB ============

    def qkzb(self, cfg, report):
        p = cfg.params()
        tol = cfg.tolerance("qkzb")
        rng = cfg.rng("qkzb")
        sys = baxter_system(p, cfg.left_pack)
        z = _sample_complex(rng, p.n, cfg.box)
        xis = list(_sample_complex(rng, 2, cfg.box))
        sample_fns = sample_functions(min(50, cfg.samples), p.n, p.q, rng)
        self.say(f"🔍 Relations de Coxeter sur {len(sample_fns)} fonctions tests...")
        for name, value in braid_residuals(sys, z, sample_fns, xis).items():
            report.add(f"qkzb.coxeter_{name}", "relations de Coxeter du cocycle d'opérateurs",
                       [z, xis], value, tol)
        report.add("qkzb.deux_routes", "formule développée de M^{τ(-e_1)}", [z, xis],
                   transport_two_route_residual(z, sys, sample_fns, xis), tol)
        a, b, c = _sample_complex(rng, 3, cfg.box)
        for key, value in hypothesis_residuals(sys, a, b, c, xis[0]).items():
            report.add(f"qkzb.hypothese_{key}", "R, K, K̲ unitaires dynamiques", [a, b, c, xis[0]],
                       value, cfg.tolerance("dynamical") * 100)
        name, worst = sensitivity_check(sys, z, sample_fns[:5], xis)
        report.add("qkzb.sensibilite", f"K perturbée casse {name}", [z, xis], worst,
                   SENSITIVITY_FLOOR, minimum=True)

    # ============ ORACLE ============

    def oracle(self, cfg, report):
        rng = cfg.rng("oracle")
        for _ in range(min(20, cfg.samples)):
            x = complex(np.exp(_sample_complex(rng, 1, 1.0)[0]))
            value = theta(x, cfg.q)
            residual = abs(value - theta_mp(x, cfg.q)) / max(1.0, abs(value))
            report.add("oracle.theta", "θ(x;q) contre mpmath", [x, cfg.q], residual, 1e-13)

    # ============ ORCHESTRATION ============

    def genericity_ok(self, cfg):
        p = cfg.params()
        m = MultiplicityFunction.from_params(p)
        return genericity(p.gamma(), m, cfg.truncation())

    def run(self, name, cfg):
        if name == "all":
            report = CheckReport("all")
            for suite in SUITES:
                report.extend(self.run(suite, cfg))
            return report
        if name not in SUITES:
            raise ConfigError("suite", f"batterie inconnue {name!r} (choix : {', '.join(SUITES)}, all)")
        report = CheckReport(name)
        self.say("\n" + "=" * 60)
        self.say(f"🚀 BATTERIE {name.upper()}")
        self.say("=" * 60)
        if not self.genericity_ok(cfg):
            report.skipped = "non-generic"
            self.say("⚠️ Paramètres non génériques : batterie ignorée")
            return report
        try:
            getattr(self, name)(cfg, report)
            if cfg.oracle:
                self.oracle(cfg, report)
        except NonGenericError as exc:
            report.skipped = "non-generic"
            self.say(f"⚠️ Paramètres non génériques : {exc}")
            return report
        except QKZError as exc:
            self.say(f"❌ Erreur batterie {name}: {exc}")
            raise
        summary = report.summary()
        status = "✅" if report.passed else "❌"
        self.say(f"{status} {summary['passed']}/{summary['cases']} cas validés")
        for case in report.failures[:10]:
            self.say(f"   • {case.identity}: résidu {case.residual:.3e} > {case.tolerance:.1e}")
        self.say("=" * 60)
        return report


def _baxter_anchor(key):
    if key.startswith("dybe"):
        return "équation de Yang-Baxter dynamique"
    if key.startswith("unitarite"):
        return "unitarité dynamique"
    if key.startswith("reflexion_droite"):
        return "équation de réflexion dynamique droite"
    return {
        "reflexion_gauche_Ba": "K_Ba(z,-ξ) solution de l'équation gauche",
        "croisement": "symétrie de croisement de R_Ba",
        "renversement_spin": "symétrie de renversement de spin de K_Ba",
        "decouplage_beta": "β_Ba = μ̃(ξ)/μ(-z)",
        "identite_theta": "identités thêta reliant R_cm aux fonctions e_α",
    }[key]


def run_suite(name, cfg=None, quiet=False):
    cfg = RunConfig() if cfg is None else cfg
    return SuiteRunner(quiet=quiet).run(name, cfg)


# ============ EXPORTS ============

def _write_json(document, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(document, handle, sort_keys=True, indent=2, ensure_ascii=False)
        handle.write("\n")
    return path


def series_document(cfg, epsilon=None):
    p = cfg.params()
    H = cfg.truncation()
    if epsilon is None:
        solutions = solve_basis(p, height_cap=H)
    else:
        solutions = [solve_gamma(epsilon, H, p)]
    return {"kind": "series-coefficients", "solutions": [to_document(sol) for sol in solutions]}


def face_document(cfg, window=FACE_WINDOW, z=0.27 + 0.1j, xi=None):
    p = cfg.params()
    xi = p.xi if xi is None else xi
    table = FaceWeightTable.for_8vsos(p)
    return {"kind": "face-weights", "window": [min(window), max(window)], "z": _pair(z), "xi": _pair(xi),
            "weights": table.weight_table(window, z, xi)}


def connection_document(cfg, word=None, z=None):
    p = cfg.connection_params()
    basis = solve_basis(p, height_cap=cfg.connection_height)
    z = extraction_point(p.n) if z is None else np.asarray(z, dtype=complex)
    words = [[i] for i in range(1, p.n + 1)] if word is None else [list(word)]
    shift = np.zeros(p.n)
    shift[0] = 1.0
    entries = []
    for w in words:
        v = WeylElement.from_word(w, p.n)
        for point in (z, z + shift):
            value = extract_connection(v, point, basis)
            entries.append({"word": w, "z": [_pair(c) for c in point],
                            "re": np.real(value).tolist(), "im": np.imag(value).tolist()})
    return {"kind": "connection-matrices", "q": p.q, "H": cfg.connection_height, "matrices": entries}


def export(kind, cfg, path, **options):
    """Écrit un document JSON ; les erreurs d'E/S remontent"""
    builders = dict(zip(EXPORT_KINDS, (series_document, face_document, connection_document)))
    if kind not in builders:
        raise ConfigError("kind", f"export inconnu {kind!r}")
    document = builders[kind](cfg, **options)
    try:
        written = _write_json(document, path)
    except OSError as exc:
        print(f"❌ Erreur écriture {path}: {exc}")
        raise
    return written


def load_coefficients(path):
    """Relit un export series-coefficients"""
    with open(path, encoding="utf-8") as handle:
        document = json.load(handle)
    if document.get("kind") != "series-coefficients":
        raise ConfigError("kind", f"document {path} : series-coefficients attendu")
    return [from_document(doc) for doc in document["solutions"]]


def report_path(name, cfg):
    return Path(config.REPORT_DIR) / f"{name}_n{cfg.n}_seed{cfg.seed}.json"


def ensure_report_dir():
    os.makedirs(config.REPORT_DIR, exist_ok=True)
