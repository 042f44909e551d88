/**
 * Page controller: wires the search box, profile controls, ranking table and
 * trend chart together against the HTTP API, and mirrors every interaction
 * into the URL so the view can be reopened from a link.
 */

import {
  ApiClient,
  ApiError,
  latestOnly,
  type CompareResponse,
  type DiseaseHit,
  type Profile,
  type TreatmentsResponse,
} from "./api";
import { TrendChart } from "./chart";
import { TreatmentTable } from "./table";
import {
  decodeState,
  encodeState,
  type AppState,
  type TableSort,
} from "./urlState";
import {
  checkWeights,
  CONSISTENT_WEIGHTS,
  EPOCH_COUNT,
  NOVEL_WEIGHTS,
} from "./weights";

const MAX_COMPARE = 10;

const PROFILE_LABELS: ReadonlyArray<{ profile: Profile; label: string }> = [
  { profile: "new", label: "Novel" },
  { profile: "established", label: "Consistent" },
  { profile: "custom", label: "Custom" },
];

export class App {
  readonly state: AppState;

  private readonly client: ApiClient;
  private readonly table: TreatmentTable;
  private readonly chart: TrendChart;
  private readonly inflight = new Set<Promise<unknown>>();

  private readonly searchForm: HTMLFormElement;
  private readonly searchInput: HTMLInputElement;
  private readonly resultList: HTMLUListElement;
  private readonly rankingSection: HTMLElement;
  private readonly diseaseHeading: HTMLHeadingElement;
  private readonly profileInputs: HTMLInputElement[] = [];
  private readonly weightInputs: HTMLInputElement[] = [];
  private readonly applyButton: HTMLButtonElement;
  private readonly weightError: HTMLParagraphElement;
  private readonly compareButton: HTMLButtonElement;
  private readonly statusLine: HTMLParagraphElement;

  private diseaseName = "";

  // Stale-response guards: only the most recent call of each kind may land.
  private readonly fetchSearch: (q: string) => Promise<DiseaseHit[] | undefined>;
  private readonly fetchRanking: (
    cui: string,
    profile: Profile,
    weights: number[] | null,
  ) => Promise<TreatmentsResponse | undefined>;
  private readonly fetchCompare: (
    cui: string,
    treatments: string[],
  ) => Promise<CompareResponse | undefined>;

  constructor(root: HTMLElement, client: ApiClient) {
    this.client = client;
    this.state = decodeState(window.location.search);

    this.fetchSearch = latestOnly((q: string) => this.client.searchDiseases(q));
    this.fetchRanking = latestOnly(
      (cui: string, profile: Profile, weights: number[] | null) =>
        this.client.rankedTreatments(cui, {
          profile,
          weights: profile === "custom" && weights ? weights : undefined,
        }),
    );
    this.fetchCompare = latestOnly((cui: string, treatments: string[]) =>
      this.client.compare(cui, treatments),
    );

    root.textContent = "";

    const title = document.createElement("h1");
    title.textContent = "Treatment trends";
    root.appendChild(title);

    this.statusLine = document.createElement("p");
    this.statusLine.id = "status-line";
    root.appendChild(this.statusLine);

    this.searchForm = document.createElement("form");
    this.searchForm.id = "search-form";
    this.searchInput = document.createElement("input");
    this.searchInput.name = "disease-query";
    this.searchInput.type = "search";
    this.searchInput.placeholder = "Disease name or CUI";
    this.searchInput.value = this.state.query;
    const searchButton = document.createElement("button");
    searchButton.type = "submit";
    searchButton.textContent = "Search";
    this.searchForm.append(this.searchInput, searchButton);
    this.searchForm.addEventListener("submit", (event) => {
      event.preventDefault();
      this.state.query = this.searchInput.value;
      this.syncUrl();
      this.track(this.runSearch());
    });
    root.appendChild(this.searchForm);

    this.resultList = document.createElement("ul");
    this.resultList.id = "disease-results";
    root.appendChild(this.resultList);

    this.rankingSection = document.createElement("section");
    this.rankingSection.id = "ranking-section";
    this.rankingSection.hidden = true;
    root.appendChild(this.rankingSection);

    this.diseaseHeading = document.createElement("h2");
    this.diseaseHeading.id = "disease-heading";
    this.rankingSection.appendChild(this.diseaseHeading);

    const profileForm = document.createElement("form");
    profileForm.id = "profile-form";
    profileForm.addEventListener("submit", (event) => event.preventDefault());
    for (const { profile, label } of PROFILE_LABELS) {
      const wrap = document.createElement("label");
      wrap.className = "profile-choice";
      const radio = document.createElement("input");
      radio.type = "radio";
      radio.name = "profile";
      radio.value = profile;
      radio.addEventListener("change", () => this.onProfileChange(profile));
      this.profileInputs.push(radio);
      wrap.append(radio, document.createTextNode(` ${label}`));
      profileForm.appendChild(wrap);
    }

    const weightRow = document.createElement("div");
    weightRow.id = "weight-row";
    for (let i = 0; i < EPOCH_COUNT; i++) {
      const input = document.createElement("input");
      input.type = "number";
      input.min = "0";
      input.step = "any";
      input.className = "weight-input";
      input.dataset.epoch = String(i);
      input.setAttribute("aria-label", `weight for epoch ${i + 1}`);
      input.addEventListener("input", () => this.onWeightsEdited());
      this.weightInputs.push(input);
      weightRow.appendChild(input);
    }
    profileForm.appendChild(weightRow);

    this.applyButton = document.createElement("button");
    this.applyButton.type = "button";
    this.applyButton.id = "apply-profile";
    this.applyButton.textContent = "Apply weights";
    this.applyButton.addEventListener("click", () => this.onApplyWeights());
    profileForm.appendChild(this.applyButton);

    this.weightError = document.createElement("p");
    this.weightError.id = "weight-error";
    profileForm.appendChild(this.weightError);

    this.rankingSection.appendChild(profileForm);

    this.table = new TreatmentTable({
      onSortChange: (sort: TableSort) => {
        this.state.sort = sort;
        this.syncUrl();
        this.table.update(this.currentRows, this.state.sort, this.state.compare);
      },
      onSelectionChange: (selected: string[]) => {
        this.state.compare = selected;
        this.syncUrl();
        this.refreshCompareButton();
      },
    });
    this.rankingSection.appendChild(this.table.element);

    this.compareButton = document.createElement("button");
    this.compareButton.type = "button";
    this.compareButton.id = "compare-button";
    this.compareButton.textContent = "Compare selected";
    this.compareButton.addEventListener("click", () => {
      this.track(this.runCompare());
    });
    this.rankingSection.appendChild(this.compareButton);

    this.chart = new TrendChart();
    this.rankingSection.appendChild(this.chart.element);

    this.renderProfileControls();
    this.refreshCompareButton();
  }

  private currentRows: TreatmentsResponse["treatments"] = [];

  /** Resolves once every request started so far has settled. */
  async whenIdle(): Promise<void> {
    while (this.inflight.size > 0) {
      await Promise.allSettled([...this.inflight]);
    }
  }

  private track<T>(work: Promise<T>): void {
    this.inflight.add(work);
    void work.finally(() => this.inflight.delete(work));
  }

  /** Restore whatever the URL describes: search, selection, comparison. */
  init(): void {
    if (this.state.query) {
      this.track(this.runSearch());
    }
    if (this.state.diseaseCui) {
      this.track(this.restoreDisease(this.state.diseaseCui));
    }
  }

  private syncUrl(): void {
    const encoded = encodeState(this.state);
    const target = encoded
      ? `${window.location.pathname}?${encoded}`
      : window.location.pathname;
    window.history.replaceState(null, "", target);
  }

  private setStatus(message: string): void {
    this.statusLine.textContent = message;
  }

  private describe(error: unknown): string {
    if (error instanceof ApiError) {
      return `${error.code}: ${error.message}`;
    }
    return error instanceof Error ? error.message : String(error);
  }

  private async runSearch(): Promise<void> {
    const query = this.state.query.trim();
    if (!query) {
      this.resultList.textContent = "";
      return;
    }
    this.setStatus("Searching…");
    let hits: DiseaseHit[] | undefined;
    try {
      hits = await this.fetchSearch(query);
    } catch (error) {
      this.setStatus(this.describe(error));
      return;
    }
    if (hits === undefined) return; // superseded by a newer search
    this.setStatus(hits.length === 0 ? "No matching disorders." : "");
    this.renderResults(hits);
  }

  private renderResults(hits: DiseaseHit[]): void {
    this.resultList.textContent = "";
    for (const hit of hits) {
      const item = document.createElement("li");
      const button = document.createElement("button");
      button.type = "button";
      button.dataset.cui = hit.cui;
      button.textContent = `${hit.preferred_name} (${hit.cui})`;
      button.addEventListener("click", () => {
        this.track(this.selectDisease(hit.cui, hit.preferred_name));
      });
      item.appendChild(button);
      this.resultList.appendChild(item);
    }
  }

  async selectDisease(cui: string, name: string): Promise<void> {
    this.state.diseaseCui = cui;
    this.state.compare = [];
    this.diseaseName = name;
    this.chart.clear();
    this.syncUrl();
    await this.loadTreatments();
  }

  /** Reopen a disease from the URL, fetching its display name by CUI. */
  private async restoreDisease(cui: string): Promise<void> {
    try {
      const hits = await this.client.searchDiseases(cui);
      const match = hits.find((hit) => hit.cui === cui);
      this.diseaseName = match ? match.preferred_name : cui;
    } catch {
      this.diseaseName = cui;
    }
    await this.loadTreatments();
    if (this.state.compare.length > 0) {
      await this.runCompare();
    }
  }

  private async loadTreatments(): Promise<void> {
    const cui = this.state.diseaseCui;
    if (!cui) return;
    this.setStatus("Ranking treatments…");
    let response: TreatmentsResponse | undefined;
    try {
      response = await this.fetchRanking(cui, this.state.profile, this.state.weights);
    } catch (error) {
      this.setStatus(this.describe(error));
      return;
    }
    if (response === undefined) return; // superseded by a newer request
    this.setStatus("");
    this.currentRows = response.treatments;
    this.rankingSection.hidden = false;
    this.diseaseHeading.textContent = this.diseaseName
      ? `${this.diseaseName} (${cui})`
      : cui;
    this.table.update(this.currentRows, this.state.sort, this.state.compare);
    this.state.compare = this.table.selection();
    this.refreshCompareButton();
    this.renderProfileControls();
    this.syncUrl();
  }

  private async runCompare(): Promise<void> {
    const picked = this.state.compare;
    if (picked.length === 0 || picked.length > MAX_COMPARE) return;
    this.setStatus("Comparing…");
    let response: CompareResponse | undefined;
    try {
      response = await this.fetchCompare(this.state.diseaseCui, picked);
    } catch (error) {
      this.setStatus(this.describe(error));
      return;
    }
    if (response === undefined) return;
    this.setStatus("");
    this.chart.update(response);
  }

  private onProfileChange(profile: Profile): void {
    this.state.profile = profile;
    if (profile === "custom") {
      const fields = this.weightInputs.map((input) => input.value);
      const outcome = checkWeights(fields);
      this.state.weights = outcome.ok ? outcome.weights : null;
      this.renderProfileControls();
      this.syncUrl();
      // Ranking waits for Apply so half-typed weights never hit the API.
      return;
    }
    this.state.weights = null;
    this.renderProfileControls();
    this.syncUrl();
    this.track(this.loadTreatments());
  }

  private onWeightsEdited(): void {
    const outcome = checkWeights(this.weightInputs.map((input) => input.value));
    if (outcome.ok) {
      this.state.weights = outcome.weights;
      this.weightError.textContent = "";
      this.applyButton.disabled = false;
    } else {
      this.state.weights = null;
      this.weightError.textContent = outcome.error;
      this.applyButton.disabled = true;
    }
    this.syncUrl();
  }

  private onApplyWeights(): void {
    const outcome = checkWeights(this.weightInputs.map((input) => input.value));
    if (!outcome.ok) {
      this.weightError.textContent = outcome.error;
      this.applyButton.disabled = true;
      return;
    }
    this.state.weights = outcome.weights;
    this.syncUrl();
    this.track(this.loadTreatments());
  }

  private profileWeights(): readonly number[] {
    switch (this.state.profile) {
      case "new":
        return NOVEL_WEIGHTS;
      case "established":
        return CONSISTENT_WEIGHTS;
      case "custom":
        return this.state.weights ?? NOVEL_WEIGHTS;
    }
  }

  private renderProfileControls(): void {
    for (const radio of this.profileInputs) {
      radio.checked = radio.value === this.state.profile;
    }
    const custom = this.state.profile === "custom";
    const shown = this.profileWeights();
    this.weightInputs.forEach((input, i) => {
      input.disabled = !custom;
      input.value = String(shown[i]);
    });
    if (custom) {
      this.onWeightsEdited();
    } else {
      this.weightError.textContent = "";
      this.applyButton.disabled = true;
    }
  }

  private refreshCompareButton(): void {
    const size = this.state.compare.length;
    this.compareButton.disabled = size === 0 || size > MAX_COMPARE;
  }
}
