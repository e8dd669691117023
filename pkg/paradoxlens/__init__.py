"""
paradoxlens: регрессионный разбор парадокса Лорда.

Две оценки эффекта группы на одних и тех же данных: разность групповых
средних прироста (A1) и разность средних по подгруппам начального веса,
взвешенных общими частотами (A2); построение надмодели из остатков
подмодели и проверка условий интерпретации коэффициентов.
"""

__version__ = "0.1.0"
