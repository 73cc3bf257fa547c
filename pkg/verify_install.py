#!/usr/bin/env python3
"""Verify sepcert installation and reproduce the optimal-map counterexample."""

import sys
from sepcert import counterexample, spa_entanglement_certificate
from sepcert.choi import transpose_map

def main():
    print("sepcert Installation Verification")
    print("=" * 50)
    
    try:
        # Transpose map: tight at the bound
        print("\n1. Certificate for the transpose map (n=3)...")
        cert = spa_entanglement_certificate(transpose_map(3))
        print(f"   ✓ T = {cert.T:.12g}, bound = {cert.bound:.12g}")
        print(f"   ✓ Verdict: {cert.verdict.value}")
        
        # Counterexample chain
        print("\n2. Building the counterexample (epsilon = 0.1)...")
        report = counterexample(0.1)
        print(f"   ✓ delta = {report.delta:.6g}, k = {report.k:.12g}")
        print(f"   ✓ S(C_psi) = {report.S_psi:.12g} > bound {report.bound:.12g}")
        print(f"   ✓ Chain: {sum(e.holds for e in report.chain)}/{len(report.chain)} links hold")
        
        if report.failed_links:
            print(f"\n❌ Broken links: {', '.join(report.failed_links)}")
            return 3
        
        print("\n" + "=" * 50)
        print(f"✅ Installation verified: SPA is {report.verdict.value}")
        print(f"\nYou can now:")
        print(f"  - Run 'python -m sepcert hakye --epsilon 0.1' for the full report")
        print(f"  - Run 'python -m sepcert export transpose -o t.json' to get a map file")
        print(f"  - Run 'pytest tests/' to run the test suite")
        
        return 0
        
    except Exception as e:
        print(f"\n❌ Error: {e}")
        print("\nPlease ensure all dependencies are installed:")
        print("  pip install -r requirements.txt")
        return 1

if __name__ == "__main__":
    sys.exit(main())
