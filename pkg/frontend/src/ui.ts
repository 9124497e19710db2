// DOM rendering and wiring for the two-pane workspace: a plain-text
// editor on the left, and a sidebar with a feedback-history tab plus one
// tab per persona on the right.

import {
  ApiClient,
  ApiError,
  Card,
  Pair,
  Persona,
  SECTION_NAMES,
  SECTION_TITLES,
  SectionGuidance,
  SectionName,
} from "./api.js";
import { EventQueue } from "./events.js";
import { WorkspaceState } from "./state.js";

const AUTOSAVE_DELAY_MS = 400;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) {
    node.setAttribute(k, v);
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export class App {
  readonly state = new WorkspaceState();
  events!: EventQueue;
  private personas: Persona[] = [];
  private cards: Card[] = [];
  private guidance: SectionGuidance[] = [];
  private documentId = "";
  private saveTimer: ReturnType<typeof setTimeout> | null = null;
  private errorMessage: string | null = null;
  private contextNotices = new Map<string, string>();

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
  ) {}

  async init(documentId: string): Promise<void> {
    this.documentId = documentId;
    this.events = new EventQueue(this.api, documentId);
    const doc = await this.api.getDocument(documentId);
    this.state.setDocumentText(doc.text);
    [this.personas, this.cards, this.guidance] = await Promise.all([
      this.api.listPersonas(),
      this.api.history(documentId),
      this.api.guidance(),
    ]);
    this.render();
  }

  // --- rendering ----------------------------------------------------------

  render(): void {
    this.root.innerHTML = "";
    const layout = el("div", { class: "workspace" });
    layout.appendChild(this.renderEditor());
    layout.appendChild(this.renderSidebar());
    this.root.appendChild(layout);
  }

  private renderEditor(): HTMLElement {
    const pane = el("div", { class: "editor-pane", "data-testid": "editor-pane" });
    const textarea = el("textarea", { "data-testid": "editor" });
    textarea.value = this.state.documentText;
    textarea.addEventListener("focus", () => this.events.emit("editor_focus"));
    textarea.addEventListener("input", () => {
      this.state.setDocumentText(textarea.value);
      this.scheduleSave(textarea.value);
    });
    const updateSelection = () => {
      const { selectionStart, selectionEnd } = textarea;
      this.state.setSelection(
        selectionStart !== null && selectionEnd !== null
          ? { start: selectionStart, end: selectionEnd }
          : null,
      );
      this.refreshFeedbackButtons();
    };
    textarea.addEventListener("select", updateSelection);
    textarea.addEventListener("keyup", updateSelection);
    textarea.addEventListener("mouseup", updateSelection);
    pane.appendChild(textarea);
    return pane;
  }

  private renderSidebar(): HTMLElement {
    const sidebar = el("div", { class: "sidebar", "data-testid": "sidebar" });
    sidebar.addEventListener("focusin", () => this.events.emit("sidebar_focus"));

    const nav = el("div", { class: "tabs", role: "tablist" });
    nav.appendChild(
      this.tabButton("Feedback History", this.state.activeTab.kind === "history", () => {
        this.state.openTab({ kind: "history" });
        this.render();
      }),
    );
    for (const p of this.personas) {
      const active =
        this.state.activeTab.kind === "persona" && this.state.activeTab.personaId === p.id;
      const btn = this.tabButton(p.name || "Unnamed persona", active, () => {
        this.state.openTab({ kind: "persona", personaId: p.id });
        this.events.emit("persona_tab_opened", { persona_id: p.id });
        this.render();
      });
      btn.setAttribute("data-testid", `tab-${p.id}`);
      nav.appendChild(btn);
    }
    const plus = this.tabButton("+", false, () => void this.createPersona());
    plus.setAttribute("data-testid", "tab-new-persona");
    plus.setAttribute("title", "Add a new persona");
    nav.appendChild(plus);
    sidebar.appendChild(nav);

    if (this.errorMessage !== null) {
      sidebar.appendChild(this.renderErrorCard());
    }

    const tab = this.state.activeTab;
    if (tab.kind === "history") {
      sidebar.appendChild(this.renderHistoryTab());
    } else {
      const persona = this.personas.find((p) => p.id === tab.personaId);
      if (persona) {
        sidebar.appendChild(this.renderPersonaTab(persona));
      }
    }
    return sidebar;
  }

  private tabButton(label: string, active: boolean, onClick: () => void): HTMLButtonElement {
    const btn = el("button", { class: active ? "tab active" : "tab", role: "tab" }, label);
    btn.addEventListener("click", onClick);
    return btn;
  }

  private renderErrorCard(): HTMLElement {
    const card = el("div", { class: "error-card", "data-testid": "error-card" });
    card.appendChild(el("span", {}, this.errorMessage ?? ""));
    const dismiss = el("button", { "data-testid": "error-dismiss" }, "Dismiss");
    dismiss.addEventListener("click", () => {
      this.errorMessage = null;
      this.render();
    });
    card.appendChild(dismiss);
    return card;
  }

  // --- persona form -------------------------------------------------------

  private renderPersonaTab(persona: Persona): HTMLElement {
    const panel = el("div", { class: "persona-form", "data-testid": `persona-form-${persona.id}` });
    const nameInput = el("input", {
      type: "text",
      placeholder: "Persona name",
      "data-testid": "persona-name",
    });
    nameInput.value = persona.name;
    nameInput.addEventListener("change", () => {
      void this.guard(async () => {
        const updated = await this.api.renamePersona(persona.id, nameInput.value);
        this.replacePersona(updated);
        this.events.emit("persona_edited", { persona_id: persona.id, field: "name" });
        this.render();
      });
    });
    panel.appendChild(nameInput);

    for (const section of SECTION_NAMES) {
      panel.appendChild(this.renderSection(persona, section));
    }
    return panel;
  }

  private renderSection(persona: Persona, section: SectionName): HTMLElement {
    const wrap = el("div", { class: "section", "data-testid": `section-${section}` });
    const header = el("div", { class: "section-header" });
    header.appendChild(el("h3", {}, SECTION_TITLES[section]));
    header.appendChild(this.renderInfoButton(section));
    wrap.appendChild(header);

    const pairs = persona.sections[section];
    pairs.forEach((pair, index) => {
      wrap.appendChild(this.renderPairRow(persona, section, index, pair));
    });

    const addRow = el("button", { class: "add-row", "data-testid": `add-row-${section}` }, "Add row");
    addRow.addEventListener("click", () => {
      const attribute = window.prompt("Attribute") ?? "";
      const description = window.prompt("Description") ?? "";
      if (!attribute.trim()) {
        this.errorMessage = "Attribute must not be empty.";
        this.render();
        return;
      }
      void this.guard(async () => {
        const updated = await this.api.addPair(persona.id, section, { attribute, description });
        this.replacePersona(updated);
        this.events.emit("persona_edited", { persona_id: persona.id, section });
        this.render();
      });
    });
    wrap.appendChild(addRow);
    return wrap;
  }

  private renderInfoButton(section: SectionName): HTMLElement {
    const info = el("span", { class: "info-button", "data-testid": `info-${section}` }, "ⓘ");
    const tooltip = el("div", { class: "tooltip hidden", "data-testid": `tooltip-${section}` });
    const g = this.guidance.find((x) => x.section === section);
    if (g) {
      tooltip.appendChild(el("p", {}, g.description));
      const examples = el("ul", {});
      for (const pair of g.example_pairs) {
        examples.appendChild(el("li", {}, `${pair.attribute}: ${pair.description}`));
      }
      tooltip.appendChild(examples);
    }
    info.addEventListener("mouseenter", () => tooltip.classList.remove("hidden"));
    info.addEventListener("mouseleave", () => tooltip.classList.add("hidden"));
    const holder = el("span", { class: "info-holder" });
    holder.appendChild(info);
    holder.appendChild(tooltip);
    return holder;
  }

  private renderPairRow(
    persona: Persona,
    section: SectionName,
    index: number,
    pair: Pair,
  ): HTMLElement {
    const row = el("div", { class: "pair-row", "data-testid": `pair-${section}-${index}` });
    const attr = el("input", { type: "text", class: "attr", placeholder: "attribute" });
    attr.value = pair.attribute;
    const desc = el("input", { type: "text", class: "desc", placeholder: "description" });
    desc.value = pair.description;
    const commit = () => {
      if (!attr.value.trim()) {
        this.errorMessage = "Attribute must not be empty.";
        this.render();
        return;
      }
      void this.guard(async () => {
        const updated = await this.api.editPair(persona.id, section, index, {
          attribute: attr.value,
          description: desc.value,
        });
        this.replacePersona(updated);
        this.events.emit("persona_edited", { persona_id: persona.id, section });
        this.render();
      });
    };
    attr.addEventListener("change", commit);
    desc.addEventListener("change", commit);
    const trash = el("button", { class: "trash", "data-testid": `trash-${section}-${index}` }, "🗑");
    trash.addEventListener("click", () => {
      void this.guard(async () => {
        const updated = await this.api.removePair(persona.id, section, index);
        this.replacePersona(updated);
        this.events.emit("persona_edited", { persona_id: persona.id, section });
        this.render();
      });
    });
    row.appendChild(attr);
    row.appendChild(desc);
    row.appendChild(trash);
    return row;
  }

  // --- feedback history ---------------------------------------------------

  private renderHistoryTab(): HTMLElement {
    const panel = el("div", { class: "history-tab", "data-testid": "history-tab" });

    const ask = el("div", { class: "ask" });
    ask.appendChild(el("p", {}, "Get feedback from:"));
    const buttons = el("div", { class: "persona-buttons", "data-testid": "persona-buttons" });
    for (const p of this.personas) {
      const btn = el(
        "button",
        { class: "persona-button", "data-testid": `feedback-btn-${p.id}` },
        p.name || "Unnamed persona",
      );
      btn.disabled = !this.state.hasSelection;
      btn.addEventListener("click", () => void this.requestFeedback(p.id));
      buttons.appendChild(btn);
    }
    ask.appendChild(buttons);
    const hint = el(
      "p",
      { class: "hint", "data-testid": "selection-hint" },
      "Select some text in the editor to request feedback.",
    );
    hint.hidden = this.state.hasSelection;
    ask.appendChild(hint);
    panel.appendChild(ask);

    const list = el("div", { class: "card-list", "data-testid": "card-list" });
    for (const card of this.cards) {
      list.appendChild(this.renderCard(card));
    }
    panel.appendChild(list);
    return panel;
  }

  private renderCard(card: Card): HTMLElement {
    const node = el("div", { class: "feedback-card", "data-testid": `card-${card.id}` });
    const header = el("div", { class: "card-header" });
    header.appendChild(el("strong", { class: "card-persona" }, card.persona_name));
    header.appendChild(el("time", {}, new Date(card.created_at).toLocaleString()));
    node.appendChild(header);

    const collapsed = this.state.isCollapsed(card.id);
    const body = el(
      "p",
      { class: "card-text", "data-testid": `card-text-${card.id}` },
      collapsed ? card.preview : card.feedback.text,
    );
    node.appendChild(body);

    if (card.feedback.text !== card.preview) {
      const toggle = el(
        "button",
        { "data-testid": `see-more-${card.id}` },
        collapsed ? "See more" : "See less",
      );
      toggle.addEventListener("click", () => {
        this.state.toggleCard(card.id);
        this.render();
      });
      node.appendChild(toggle);
    }

    const notice = this.contextNotices.get(card.id);
    if (notice) {
      node.appendChild(el("p", { class: "stale-notice", "data-testid": `stale-${card.id}` }, notice));
    }

    const showContext = el("button", { "data-testid": `show-context-${card.id}` }, "Show context");
    showContext.addEventListener("click", () => void this.showContext(card));
    node.appendChild(showContext);

    const trash = el("button", { class: "trash", "data-testid": `delete-${card.id}` }, "🗑");
    trash.addEventListener("click", () => void this.deleteCard(card.id));
    node.appendChild(trash);
    return node;
  }

  // --- actions ------------------------------------------------------------

  private scheduleSave(text: string): void {
    if (this.saveTimer !== null) {
      clearTimeout(this.saveTimer);
    }
    this.saveTimer = setTimeout(() => {
      this.saveTimer = null;
      void this.guard(async () => {
        await this.api.updateDocument(this.documentId, text);
      });
    }, AUTOSAVE_DELAY_MS);
  }

  async flushSave(): Promise<void> {
    if (this.saveTimer !== null) {
      clearTimeout(this.saveTimer);
      this.saveTimer = null;
      await this.api.updateDocument(this.documentId, this.state.documentText);
    }
  }

  private async createPersona(): Promise<void> {
    await this.guard(async () => {
      const persona = await this.api.createPersona("");
      this.personas.push(persona);
      this.events.emit("persona_created", { persona_id: persona.id });
      this.state.openTab({ kind: "persona", personaId: persona.id });
      this.render();
    });
  }

  async requestFeedback(personaId: string): Promise<void> {
    const selection = this.state.selection;
    if (!selection) {
      return;
    }
    await this.guard(async () => {
      await this.flushSave();
      await this.events.flush(); // keep the event log ordered before the server logs the request
      await this.api.requestFeedback(this.documentId, personaId, selection);
      this.cards = await this.api.history(this.documentId);
      this.render();
    });
  }

  private async deleteCard(cardId: string): Promise<void> {
    await this.guard(async () => {
      await this.api.deleteCard(this.documentId, cardId);
      this.state.forgetCard(cardId);
      this.contextNotices.delete(cardId);
      this.cards = await this.api.history(this.documentId);
      this.render();
    });
  }

  private async showContext(card: Card): Promise<void> {
    await this.guard(async () => {
      const ctx = await this.api.cardContext(this.documentId, card.id);
      if (ctx.stale) {
        this.contextNotices.set(
          card.id,
          `The document changed since this feedback; it was based on: "${ctx.selected_text}"`,
        );
        this.render();
        return;
      }
      this.contextNotices.delete(card.id);
      this.render();
      const textarea = this.root.querySelector<HTMLTextAreaElement>('[data-testid="editor"]');
      if (textarea) {
        textarea.focus();
        textarea.setSelectionRange(ctx.start, ctx.end);
        this.state.setSelection({ start: ctx.start, end: ctx.end });
      }
    });
  }

  private refreshFeedbackButtons(): void {
    const enabled = this.state.hasSelection;
    this.root
      .querySelectorAll<HTMLButtonElement>(".persona-button")
      .forEach((btn) => (btn.disabled = !enabled));
    const hint = this.root.querySelector<HTMLElement>('[data-testid="selection-hint"]');
    if (hint) {
      hint.hidden = enabled;
    }
  }

  private replacePersona(updated: Persona): void {
    this.personas = this.personas.map((p) => (p.id === updated.id ? updated : p));
  }

  private async guard(fn: () => Promise<void>): Promise<void> {
    try {
      await fn();
    } catch (err) {
      this.errorMessage = err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
      this.render();
    }
  }
}
