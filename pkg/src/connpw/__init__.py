"""Connected pathwidth toolkit: XP dynamic program, structuring transform and brute-force oracles."""
