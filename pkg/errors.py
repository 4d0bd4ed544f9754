#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Hiérarchie d'exceptions du projet.
Les évaluateurs numériques ne font que lever ; seuls le harnais et la CLI affichent.
"""


class QKZError(Exception):
    """Racine de toutes les erreurs du projet"""


class PoleError(QKZError, ValueError):
    """Un dénominateur s'annule (pôle d'un évaluateur)"""

    def __init__(self, where, argument=None):
        self.where = where
        self.argument = argument
        message = f"pôle rencontré dans {where}"
        if argument is not None:
            message += f" (argument={argument})"
        super().__init__(message)


class NonGenericError(QKZError):
    """Paramètres non génériques : espace propre de mauvaise dimension, système singulier"""

    def __init__(self, message, height=None):
        self.height = height
        if height is not None:
            message = f"{message} (hauteur {height})"
        super().__init__(message)


class IllConditionedError(QKZError):
    """Matrice numériquement non inversible"""

    def __init__(self, message, cond):
        self.cond = cond
        super().__init__(f"{message} (conditionnement {cond:.3e})")


class ConfigError(QKZError):
    """Configuration invalide ; porte le champ fautif"""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class CocycleMismatchError(QKZError):
    """Deux mots réduits du même élément donnent des valeurs différentes"""

    def __init__(self, message, residual):
        self.residual = residual
        super().__init__(f"{message} (résidu {residual:.3e})")
