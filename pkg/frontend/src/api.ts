/**
 * Typed client for the treatment trend ranking HTTP API.
 *
 * All methods resolve with parsed JSON on 2xx and throw ApiError for
 * anything else, so callers never have to inspect raw responses.
 */

export interface DiseaseHit {
  cui: string;
  preferred_name: string;
}

export interface EpochInfo {
  start: number;
  end: number;
  label: string;
}

export interface RankedTreatment {
  cui: string;
  name: string;
  rank: number;
  score: number;
  epoch_vector: number[];
  normalized_vector: number[];
  total_abstracts: number;
}

export interface TreatmentsResponse {
  disorder_cui: string;
  weights: number[];
  epochs: EpochInfo[];
  treatments: RankedTreatment[];
}

export interface CompareSeries {
  cui: string;
  name: string;
  counts: number[];
  total: number;
}

export interface CompareResponse {
  disease_cui: string;
  epochs: string[];
  treatments: CompareSeries[];
  intersection: { counts: number[]; total: number };
}

export interface ApiErrorBody {
  status: number;
  code: string;
  message: string;
}

export type Profile = "new" | "established" | "custom";
export type SortKey = "score" | "mentions";
export type SortDirection = "asc" | "desc";

export interface RankRequest {
  profile?: Profile;
  weights?: number[];
  limit?: number;
  sort?: SortKey;
  direction?: SortDirection;
}

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(body: ApiErrorBody) {
    super(body.message);
    this.status = body.status;
    this.code = body.code;
  }
}

export type FetchFn = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchFn;

  constructor(baseUrl = "", fetchFn?: FetchFn) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    const body = await response.json();
    if (!response.ok) {
      throw new ApiError(body as ApiErrorBody);
    }
    return body as T;
  }

  /** Substring search over known disorder concepts. */
  searchDiseases(query: string): Promise<DiseaseHit[]> {
    return this.request<DiseaseHit[]>(
      `/api/diseases?q=${encodeURIComponent(query)}`,
    );
  }

  /** Ranked treatments for one disorder under a weight profile. */
  rankedTreatments(
    cui: string,
    options: RankRequest = {},
  ): Promise<TreatmentsResponse> {
    const params = new URLSearchParams();
    if (options.profile) params.set("profile", options.profile);
    if (options.weights) params.set("weights", options.weights.join(","));
    if (options.limit !== undefined) params.set("limit", String(options.limit));
    if (options.sort) params.set("sort", options.sort);
    if (options.direction) params.set("direction", options.direction);
    const suffix = params.size > 0 ? `?${params.toString()}` : "";
    return this.request<TreatmentsResponse>(
      `/api/diseases/${encodeURIComponent(cui)}/treatments${suffix}`,
    );
  }

  /** Per-epoch abstract counts for selected treatments plus their overlap. */
  compare(diseaseCui: string, treatmentCuis: string[]): Promise<CompareResponse> {
    return this.request<CompareResponse>("/api/compare", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        disease_cui: diseaseCui,
        treatment_cuis: treatmentCuis,
      }),
    });
  }
}

/**
 * Wrap an async function so only the most recent call can deliver a result.
 *
 * Each invocation takes a fresh token; when a slower earlier request lands
 * after a newer one has been issued, its result resolves as undefined and the
 * caller drops it. This is how the UI discards stale search and ranking
 * responses without aborting requests.
 */
export function latestOnly<A extends unknown[], R>(
  fn: (...args: A) => Promise<R>,
): (...args: A) => Promise<R | undefined> {
  let token = 0;
  return async (...args: A) => {
    token += 1;
    const mine = token;
    try {
      const result = await fn(...args);
      return mine === token ? result : undefined;
    } catch (error) {
      // A superseded failure is as uninteresting as a superseded success.
      if (mine === token) throw error;
      return undefined;
    }
  };
}
