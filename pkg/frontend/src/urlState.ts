/**
 * Round-trip between the application state and the page query string.
 *
 * Every control that changes what is on screen is mirrored into the URL, so
 * a copied link reopens the same search, disease, weight profile, table sort
 * and comparison selection. Defaults are omitted to keep links short.
 */

import type { Profile } from "./api";
import { checkWeights } from "./weights";

export type TableColumn = "rank" | "name" | "score" | "abstracts";
export type TableDirection = "asc" | "desc";

export interface TableSort {
  column: TableColumn;
  direction: TableDirection;
}

export interface AppState {
  query: string;
  diseaseCui: string;
  profile: Profile;
  /** Only meaningful while profile is "custom". */
  weights: number[] | null;
  sort: TableSort;
  /** Treatment CUIs ticked for comparison. */
  compare: string[];
}

export const DEFAULT_SORT: TableSort = { column: "rank", direction: "asc" };

export function defaultState(): AppState {
  return {
    query: "",
    diseaseCui: "",
    profile: "new",
    weights: null,
    sort: { ...DEFAULT_SORT },
    compare: [],
  };
}

const COLUMNS: readonly TableColumn[] = ["rank", "name", "score", "abstracts"];
const PROFILES: readonly Profile[] = ["new", "established", "custom"];

export function encodeState(state: AppState): string {
  const params = new URLSearchParams();
  if (state.query) params.set("q", state.query);
  if (state.diseaseCui) params.set("cui", state.diseaseCui);
  if (state.profile !== "new") params.set("profile", state.profile);
  if (state.profile === "custom" && state.weights) {
    params.set("weights", state.weights.join(","));
  }
  if (
    state.sort.column !== DEFAULT_SORT.column ||
    state.sort.direction !== DEFAULT_SORT.direction
  ) {
    params.set("sort", `${state.sort.column}:${state.sort.direction}`);
  }
  if (state.compare.length > 0) params.set("cmp", state.compare.join(","));
  return params.toString();
}

/**
 * Parse a query string back into a state. Unknown or malformed fields fall
 * back to their defaults rather than failing, so a stale link still loads.
 */
export function decodeState(search: string): AppState {
  const params = new URLSearchParams(search);
  const state = defaultState();

  state.query = params.get("q") ?? "";
  state.diseaseCui = params.get("cui") ?? "";

  const profile = params.get("profile");
  if (profile && (PROFILES as readonly string[]).includes(profile)) {
    state.profile = profile as Profile;
  }

  const weights = params.get("weights");
  if (state.profile === "custom" && weights !== null) {
    const outcome = checkWeights(weights.split(","));
    if (outcome.ok) {
      state.weights = outcome.weights;
    } else {
      state.profile = "new";
    }
  } else if (state.profile === "custom") {
    state.profile = "new";
  }

  const sort = params.get("sort");
  if (sort) {
    const [column, direction] = sort.split(":");
    if (
      (COLUMNS as readonly string[]).includes(column) &&
      (direction === "asc" || direction === "desc")
    ) {
      state.sort = { column: column as TableColumn, direction };
    }
  }

  const compare = params.get("cmp");
  if (compare) {
    state.compare = compare.split(",").filter((cui) => cui !== "");
  }

  return state;
}
