import os
from dotenv import load_dotenv

# Charger .env seulement s'il existe (développement, campagnes locales)
if os.path.exists('.env'):
    load_dotenv()


def _complex_env(name, default):
    """Lit une variable complexe ("0.2+0.1j") avec repli sur la valeur par défaut"""
    raw = os.getenv(name) or default
    return complex(str(raw).replace(" ", ""))


# Point de paramètres par défaut (générique avec marge)
Q = float(os.getenv("QKZ_Q") or 0.3)
KAPPA = _complex_env("QKZ_KAPPA", "0.35")
ZETA = _complex_env("QKZ_ZETA", "0.2+0.1j")
ZETA_PRIME = _complex_env("QKZ_ZETA_PRIME", "-0.15")
UPSILON = _complex_env("QKZ_UPSILON", "0.4")
UPSILON_PRIME = _complex_env("QKZ_UPSILON_PRIME", "0.25j")
XI = _complex_env("QKZ_XI", "0.55")

# Paquet de bord gauche (équations qKZB)
ZETA_LEFT = _complex_env("QKZ_ZETA_LEFT", "0.1-0.05j")
ZETA_PRIME_LEFT = _complex_env("QKZ_ZETA_PRIME_LEFT", "0.3")
UPSILON_LEFT = _complex_env("QKZ_UPSILON_LEFT", "-0.2+0.15j")
UPSILON_PRIME_LEFT = _complex_env("QKZ_UPSILON_PRIME_LEFT", "0.45")

# Rang et troncature
N = int(os.getenv("QKZ_N") or 2)
HEIGHT = int(os.getenv("QKZ_HEIGHT") or 0)  # 0 = choix automatique selon n

# Extraction des matrices de connexion (nome et hauteur propres)
CONNECTION_Q = float(os.getenv("QKZ_CONNECTION_Q") or 0.25)
CONNECTION_HEIGHT = int(os.getenv("QKZ_CONNECTION_HEIGHT") or 8)

# Échantillonnage
SEED = int(os.getenv("QKZ_SEED") or 20240607)
SAMPLES = int(os.getenv("QKZ_SAMPLES") or 200)
HECKE_SAMPLES = int(os.getenv("QKZ_HECKE_SAMPLES") or 500)
MARGIN = float(os.getenv("QKZ_MARGIN") or 0.05)

# Produits infinis : arrêt quand le facteur de queue s'écarte de 1 de moins que ce seuil
TAIL_CUTOFF = float(os.getenv("QKZ_TAIL_CUTOFF") or 1e-17)

# QKZ_TOL remplace toutes les tolérances par défaut quand il est défini
TOL_OVERRIDE = float(os.getenv("QKZ_TOL")) if os.getenv("QKZ_TOL") else None

TOLERANCES = {
    "hecke": 1e-11,
    "trig": 1e-11,
    "series_consistency": 1e-9,
    "series_transport": 1e-7,
    "cross_route": 1e-8,
    "connection": 1e-5,
    "cocycle": 1e-10,
    "dynamical": 1e-11,
    "face": 1e-11,
    "qkzb": 1e-10,
}

REPORT_DIR = os.getenv("QKZ_REPORT_DIR") or "reports"
