#!/usr/bin/env python3
"""
Script de teste para verificar se o projeto está funcionando
"""
import sys
import os

# Adiciona o diretório src ao path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

try:
    from reach_geo.infrastructure.config import Config
    from reach_geo.infrastructure.scenarios.parser import bundled_scenarios, validate_file
    from reach_geo.presentation.cli import ReachGeoCLI

    print("✅ Todas as importações funcionaram!")
    print(f"✅ Configuração carregada - threads: {Config.THREADS}, tolerância: {Config.TOL:g}")

    broken = {name: validate_file(path) for name, path in bundled_scenarios().items()}
    broken = {name: issues for name, issues in broken.items() if issues}
    if broken:
        for name, issues in broken.items():
            print(f"❌ {name}: {'; '.join(i.message for i in issues)}")
        sys.exit(1)
    print(f"✅ {len(bundled_scenarios())} cenários distribuídos válidos")

    print("\n🎉 O projeto reach-geo está pronto para uso!")
    print("\nPara usar:")
    print("1. (Opcional) copie .env.example para .env")
    print("2. Execute: PYTHONPATH=src python -m reach_geo run centerout-1d --out out")

except ImportError as e:
    print(f"❌ Erro de importação: {e}")
    sys.exit(1)
except Exception as e:
    print(f"❌ Erro: {e}")
    sys.exit(1)
