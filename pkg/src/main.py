"""
Ponto de entrada principal do reach-geo
"""
from reach_geo.presentation.cli import main

if __name__ == "__main__":
    main()
