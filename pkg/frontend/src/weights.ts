/**
 * Client-side validation for custom epoch weight profiles.
 *
 * The service rejects bad weight vectors with a 400, but the form should
 * never let one leave the page in the first place: the submit control stays
 * disabled until all seven fields hold usable numbers.
 */

export const EPOCH_COUNT = 7;

export const NOVEL_WEIGHTS: readonly number[] = [1, 2, 3, 4, 5, 6, 7];
export const CONSISTENT_WEIGHTS: readonly number[] = [1, 1, 1, 1, 1, 1, 1];

export type WeightCheck =
  | { ok: true; weights: number[] }
  | { ok: false; error: string };

/**
 * Validate one weight per epoch, given as raw input field strings.
 *
 * Rules match the service contract: exactly seven values, every value a
 * finite nonnegative number, and at least one of them positive.
 */
export function checkWeights(fields: readonly string[]): WeightCheck {
  if (fields.length !== EPOCH_COUNT) {
    return { ok: false, error: `expected ${EPOCH_COUNT} weights, got ${fields.length}` };
  }
  const weights: number[] = [];
  for (let i = 0; i < fields.length; i++) {
    const text = fields[i].trim();
    if (text === "") {
      return { ok: false, error: `weight ${i + 1} is empty` };
    }
    const value = Number(text);
    if (!Number.isFinite(value)) {
      return { ok: false, error: `weight ${i + 1} is not a number` };
    }
    if (value < 0) {
      return { ok: false, error: `weight ${i + 1} is negative` };
    }
    weights.push(value);
  }
  if (weights.every((w) => w === 0)) {
    return { ok: false, error: "all weights are zero" };
  }
  return { ok: true, weights };
}

/** Format a weight vector the way the query string expects it. */
export function formatWeights(weights: readonly number[]): string {
  return weights.join(",");
}
