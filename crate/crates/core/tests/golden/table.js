// Generated by mml. Load mmlrt.js first; it defines the MMLRT runtime object.
"use strict";

function $List_length(xs) { return $toArray(xs).length; }
function $toArray(xs) {
  if (xs instanceof Array) return xs;
  var r = [];
  while (xs !== MMLRT.nil) { r.push(xs.h); xs = xs.t; }
  return r;
}

var data = ({});
var rows = MMLRT.cons(["CZE", MMLRT.GetCountry(MMLRT.GetCountries(data), "CZE")], MMLRT.cons(["DEU", MMLRT.GetCountry(MMLRT.GetCountries(data), "DEU")], MMLRT.nil));

var $result = MMLRT.list_map(function ($a) { var code = $a[0]; var ind = $a[1]; return [code, $List_length(MMLRT.GetIndicator(ind, "SE.TER.ENRR")), $List_length(MMLRT.GetIndicator(ind, "SP.POP.TOTL"))]; }, rows);
