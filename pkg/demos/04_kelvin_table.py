"""Built-in transform pairs for the Bessel realization, including Kelvin functions.

Each row pairs a function with the sequence of its coefficients in the
basis f_{n,nu}; the rule column is what the ascending series gives back.
"""
from opcalc import Realization, table
from opcalc.numerics import SeriesEvaluator, oracle_bessel

fam = {"BesselJ": "j", "BesselI": "i", "Ber": "ber", "Bei": "bei"}
for nu in (0, 1):
    print(f"nu = {nu}")
    for entry in table(Realization.bessel(nu)):
        row = entry.to_json(6)
        ev = SeriesEvaluator(entry.sequence(40), "bessel", nu)
        err = abs(ev(2.0) - oracle_bessel(fam[entry.function.family], nu, 2.0))
        print(f"  {entry.function.family:8} {str(entry.transform):28} {row['sequence']}  |err(2)|={err:.1e}")
