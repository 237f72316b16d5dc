"""Exact verification and construction toolkit for perm algebras."""
