// The part of the jQuery declarations the fixtures use.
declare var jQuery: JQueryStatic;

interface JQueryStatic {
    (selector: string, context?: any): JQuery;
}

interface JQuery {
    attr(attributeName: string): string;
    attr(attributeName: string, value: any): JQuery;
    append(content: any): JQuery;
    is(selector: string): any;
    click(handler: any): JQuery;
}
