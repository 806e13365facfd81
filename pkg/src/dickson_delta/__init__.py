"""Dickson invariants, Moore determinants and delta-operator identities over F_q."""
