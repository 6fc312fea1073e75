"""Published cross-validated metrics for the two cohorts.

Row format: (family, model, recall, precision, f2, auc) as printed in the
source study's result tables (18 gram-positive rows, 27 gram-negative
rows). Used as consistency oracles for the F-beta implementation: the
printed F-2 column should equal f_beta(precision, recall, beta=2) up to
two-decimal rounding.
"""

GPC_ROWS = [
    ("Gentamicin", "rf", 0.62, 0.54, 0.60, 0.65),
    ("Gentamicin", "mlp", 0.64, 0.52, 0.61, 0.68),
    ("Gentamicin", "cnn", 0.60, 0.48, 0.57, 0.60),
    ("Cotrimoxazole", "rf", 0.67, 0.55, 0.64, 0.71),
    ("Cotrimoxazole", "mlp", 0.68, 0.56, 0.65, 0.71),
    ("Cotrimoxazole", "cnn", 0.55, 0.42, 0.52, 0.70),
    ("Cefoxitin", "rf", 0.99, 0.92, 0.97, 0.96),
    ("Cefoxitin", "mlp", 0.99, 0.92, 0.97, 0.98),
    ("Cefoxitin", "cnn", 0.98, 0.93, 0.97, 0.98),
    ("Erythromycin", "rf", 0.81, 0.78, 0.80, 0.59),
    ("Erythromycin", "mlp", 0.82, 0.83, 0.82, 0.70),
    ("Erythromycin", "cnn", 0.78, 0.86, 0.80, 0.73),
    ("Clindamycin", "rf", 0.80, 0.66, 0.77, 0.68),
    ("Clindamycin", "mlp", 0.76, 0.69, 0.74, 0.76),
    ("Clindamycin", "cnn", 0.76, 0.70, 0.75, 0.76),
    ("Ciprofloxacin", "rf", 0.94, 0.95, 0.94, 0.82),
    ("Ciprofloxacin", "mlp", 0.92, 0.96, 0.93, 0.90),
    ("Ciprofloxacin", "cnn", 0.91, 0.95, 0.92, 0.91),
]

GNB_ROWS = [
    ("Gentamicin", "rf", 0.43, 0.48, 0.44, 0.62),
    ("Gentamicin", "mlp", 0.44, 0.37, 0.42, 0.62),
    ("Gentamicin", "cnn", 0.54, 0.35, 0.48, 0.61),
    ("Amikacin", "rf", 0.25, 0.19, 0.23, 0.55),
    ("Amikacin", "mlp", 0.48, 0.22, 0.33, 0.51),
    ("Amikacin", "cnn", 0.37, 0.35, 0.36, 0.56),
    ("Ceftazidime", "rf", 0.80, 0.88, 0.81, 0.85),
    ("Ceftazidime", "mlp", 0.84, 0.91, 0.85, 0.86),
    ("Ceftazidime", "cnn", 0.82, 0.83, 0.82, 0.87),
    ("Ceftazidime-Clavulanic Acid", "rf", 0.42, 0.54, 0.44, 0.66),
    ("Ceftazidime-Clavulanic Acid", "mlp", 0.55, 0.45, 0.50, 0.76),
    ("Ceftazidime-Clavulanic Acid", "cnn", 0.53, 0.43, 0.49, 0.73),
    ("Imipenem", "rf", 0.83, 1.0, 0.86, 0.92),
    ("Imipenem", "mlp", 0.87, 1.0, 0.88, 0.93),
    ("Imipenem", "cnn", 0.87, 1.0, 0.88, 0.93),
    ("Piperacillin-Tazobactam", "rf", 0.62, 0.56, 0.61, 0.78),
    ("Piperacillin-Tazobactam", "mlp", 0.56, 0.45, 0.51, 0.83),
    ("Piperacillin-Tazobactam", "cnn", 0.78, 0.53, 0.68, 0.86),
    ("Colistin", "rf", 0.9, 1.0, 0.92, 0.95),
    ("Colistin", "mlp", 1.0, 1.0, 1.0, 0.99),
    ("Colistin", "cnn", 1.0, 1.0, 1.0, 0.99),
    ("Ofloxacin", "rf", 0.68, 0.82, 0.70, 0.81),
    ("Ofloxacin", "mlp", 0.77, 0.83, 0.77, 0.89),
    ("Ofloxacin", "cnn", 0.65, 0.81, 0.66, 0.85),
    ("Meropenem", "rf", 0.79, 0.93, 0.81, 0.89),
    ("Meropenem", "mlp", 0.90, 0.91, 0.89, 0.90),
    ("Meropenem", "cnn", 0.88, 0.93, 0.88, 0.94),
]
