/** Per-figure axis labels and reference-line policy. */

export interface FigureMeta {
  yLabel: string;
  /** Draw the horizontal threshold at 1.0 (squeezing / entanglement bound). */
  referenceLine: boolean;
}

const VARIANCE = "Δc₋²"; // minus quadrature variance
const PHOTON = "2N̄"; // mean photon number
const NEGATIVITY = "Vₛ"; // smallest symplectic eigenvalue

export function figureMeta(figureId: number): FigureMeta {
  if (figureId >= 1 && figureId <= 4) {
    return { yLabel: VARIANCE, referenceLine: true };
  }
  if (figureId >= 5 && figureId <= 8) {
    return { yLabel: PHOTON, referenceLine: false };
  }
  if (figureId >= 9 && figureId <= 12) {
    return { yLabel: NEGATIVITY, referenceLine: true };
  }
  if (figureId === 13) {
    return { yLabel: `${NEGATIVITY}, ${VARIANCE}`, referenceLine: true };
  }
  throw new Error(`figure id must be 1..13, got ${figureId}`);
}
