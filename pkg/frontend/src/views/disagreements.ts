// Disagreement queue: postings whose coder labels differ at the selected
// taxonomy level, with an adjudicator override form per row.

import { ApiClient } from "../api.js";
import { escapeHtml } from "./labeling.js";
import type { TaxonomyLevel, TaxonomyPayload } from "../types.js";

export class DisagreementView {
  private level: TaxonomyLevel = 6;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private taxonomy: TaxonomyPayload,
    private roundId: string,
    private adjudicator: string,
  ) {}

  async refresh(): Promise<void> {
    let items;
    try {
      items = (await this.api.getDisagreements(this.roundId, this.level)).items;
    } catch (err) {
      this.root.innerHTML = `<div class="banner error">${escapeHtml(String(err))}</div>`;
      return;
    }
    const levelPicker = `
      <label>taxonomy level
        <select id="level">
          ${[12, 6, 2].map((lvl) =>
            `<option value="${lvl}" ${lvl === this.level ? "selected" : ""}>${lvl} classes</option>`,
          ).join("")}
        </select>
      </label>`;
    if (items.length === 0) {
      this.root.innerHTML = `
        <div class="panel">
          ${levelPicker}
          <p class="empty">No open disagreements at this level.</p>
        </div>`;
      this.wireLevel();
      return;
    }
    const options = this.taxonomy.fine_categories
      .map((category) => `<option value="${category}">${escapeHtml(category)}</option>`)
      .join("");
    this.root.innerHTML = `
      <div class="panel">
        ${levelPicker}
        <table class="disagreements">
          <thead><tr><th>posting</th><th>labels</th><th>adjudicate</th></tr></thead>
          <tbody>
            ${items.map((item) => `
              <tr data-tweet="${escapeHtml(item.tweet_id)}">
                <td class="tweet-text">${escapeHtml(item.text)}</td>
                <td>${Object.entries(item.labels)
                  .map(([coder, category]) =>
                    `<div><b>${escapeHtml(coder)}</b>: ${escapeHtml(category)}</div>`)
                  .join("")}</td>
                <td>
                  <select class="override-category">${options}</select>
                  <button class="override-submit">Set</button>
                </td>
              </tr>`).join("")}
          </tbody>
        </table>
      </div>`;
    this.wireLevel();
    for (const row of this.root.querySelectorAll<HTMLTableRowElement>("tr[data-tweet]")) {
      row.querySelector(".override-submit")!.addEventListener("click", async () => {
        const category =
          row.querySelector<HTMLSelectElement>(".override-category")!.value;
        try {
          await this.api.submitOverride(this.roundId, this.adjudicator,
                                        row.dataset.tweet!, category);
        } catch (err) {
          alert(String(err));
          return;
        }
        await this.refresh(); // adjudicated rows leave the queue
      });
    }
  }

  private wireLevel(): void {
    this.root.querySelector<HTMLSelectElement>("#level")!
      .addEventListener("change", (event) => {
        this.level = Number((event.target as HTMLSelectElement).value) as TaxonomyLevel;
        void this.refresh();
      });
  }
}
