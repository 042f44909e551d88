/**
 * Sortable table of ranked treatments with a per-row comparison checkbox.
 */

import type { RankedTreatment } from "./api";
import type { TableColumn, TableDirection, TableSort } from "./urlState";

interface ColumnSpec {
  column: TableColumn;
  label: string;
  compare: (a: RankedTreatment, b: RankedTreatment) => number;
}

const TABLE_COLUMNS: readonly ColumnSpec[] = [
  { column: "rank", label: "Rank", compare: (a, b) => a.rank - b.rank },
  { column: "name", label: "Treatment", compare: (a, b) => a.name.localeCompare(b.name) },
  { column: "score", label: "Score", compare: (a, b) => a.score - b.score },
  { column: "abstracts", label: "Abstracts", compare: (a, b) => a.total_abstracts - b.total_abstracts },
];

export interface TreatmentTableOptions {
  onSortChange: (sort: TableSort) => void;
  onSelectionChange: (selected: string[]) => void;
}

export function sortRows(
  rows: readonly RankedTreatment[],
  sort: TableSort,
): RankedTreatment[] {
  const spec = TABLE_COLUMNS.find((c) => c.column === sort.column);
  if (!spec) return [...rows];
  const flip = sort.direction === "desc" ? -1 : 1;
  // Stable sort, rank as tiebreak so equal keys keep service order.
  return [...rows].sort(
    (a, b) => flip * spec.compare(a, b) || a.rank - b.rank,
  );
}

export class TreatmentTable {
  readonly element: HTMLTableElement;
  private readonly options: TreatmentTableOptions;
  private rows: RankedTreatment[] = [];
  private sort: TableSort = { column: "rank", direction: "asc" };
  private selected = new Set<string>();

  constructor(options: TreatmentTableOptions) {
    this.options = options;
    this.element = document.createElement("table");
    this.element.className = "treatment-table";
  }

  update(rows: readonly RankedTreatment[], sort: TableSort, selected: readonly string[]): void {
    this.rows = [...rows];
    this.sort = sort;
    const known = new Set(rows.map((row) => row.cui));
    this.selected = new Set(selected.filter((cui) => known.has(cui)));
    this.render();
  }

  selection(): string[] {
    return this.rows
      .filter((row) => this.selected.has(row.cui))
      .map((row) => row.cui);
  }

  private headerCell(spec: ColumnSpec): HTMLTableCellElement {
    const cell = document.createElement("th");
    const active = this.sort.column === spec.column;
    const button = document.createElement("button");
    button.type = "button";
    button.className = "sort-button";
    button.dataset.column = spec.column;
    button.textContent = active
      ? `${spec.label} ${this.sort.direction === "asc" ? "▲" : "▼"}`
      : spec.label;
    button.addEventListener("click", () => {
      const direction: TableDirection =
        active && this.sort.direction === "asc" ? "desc" : "asc";
      this.options.onSortChange({ column: spec.column, direction });
    });
    cell.appendChild(button);
    return cell;
  }

  private render(): void {
    this.element.textContent = "";

    const head = this.element.createTHead();
    const headRow = head.insertRow();
    for (const spec of TABLE_COLUMNS) {
      headRow.appendChild(this.headerCell(spec));
    }
    const compareHead = document.createElement("th");
    compareHead.textContent = "Compare";
    headRow.appendChild(compareHead);

    const body = this.element.createTBody();
    for (const row of sortRows(this.rows, this.sort)) {
      const tr = body.insertRow();
      tr.dataset.cui = row.cui;
      tr.insertCell().textContent = String(row.rank);
      const nameCell = tr.insertCell();
      nameCell.textContent = row.name;
      nameCell.className = "treatment-name";
      tr.insertCell().textContent = row.score.toFixed(3);
      tr.insertCell().textContent = String(row.total_abstracts);

      const checkbox = document.createElement("input");
      checkbox.type = "checkbox";
      checkbox.className = "compare-toggle";
      checkbox.dataset.cui = row.cui;
      checkbox.checked = this.selected.has(row.cui);
      checkbox.addEventListener("change", () => {
        if (checkbox.checked) {
          this.selected.add(row.cui);
        } else {
          this.selected.delete(row.cui);
        }
        this.options.onSelectionChange(this.selection());
      });
      tr.insertCell().appendChild(checkbox);
    }
  }
}
